#include "phylocompat/verify.hpp"

#include <algorithm>
#include <sstream>

namespace phylocompat::verify {

namespace {

thread_local std::uint64_t suite_display_checks = 0;

void require_even(int n, int minimum) {
  if (n < minimum || n % 2 != 0) {
    throw DomainError("need an even n >= " + std::to_string(minimum) + ", got " +
                      std::to_string(n));
  }
}

struct NamedWitness {
  std::string name;
  Tree tree;
  std::size_t excluded;
};

std::vector<NamedWitness> named_witnesses(const FamilyInstance& family) {
  const int n = family.n;
  std::vector<NamedWitness> out;
  out.push_back({"A", lobster_a(n), family.omega_b()});
  out.push_back({"B", lobster_b(n), family.omega_a()});
  for (int i = 2; i <= n - 2; ++i) {
    out.push_back({"A_" + std::to_string(i) + "B", lobster_a_cross_b(n, i), family.chi(i)});
  }
  for (int i = 3; i <= n - 1; ++i) {
    out.push_back({"A^" + std::to_string(i) + "B", lobster_a_jagged_b(n, i), family.phi(i)});
  }
  return out;
}

std::string vertex_label(const Tree& tree, VertexId v) { return tree.vertex_name(v); }

class Trace {
 public:
  explicit Trace(LemmaReport& report) : report_(report) {}

  bool check(bool ok, const std::string& what) {
    report_.transcript.push_back((ok ? "ok   " : "FAIL ") + what);
    if (!ok && first_failure_.empty()) first_failure_ = what;
    all_ok_ = all_ok_ && ok;
    return ok;
  }
  void note(const std::string& what) { report_.transcript.push_back("     " + what); }

  bool ok() const { return all_ok_; }
  const std::string& first_failure() const { return first_failure_; }

 private:
  LemmaReport& report_;
  bool all_ok_ = true;
  std::string first_failure_;
};

void require_chain_precondition(const Tree& tree, const FamilyInstance& family) {
  if (!(tree.taxa() == family.taxa())) {
    throw DomainError("tree is not defined over the family's taxon set");
  }
  const int n = family.n;
  std::vector<std::size_t> needed{family.omega_a()};
  for (int j = 2; j <= n - 2; ++j) needed.push_back(family.chi(j));
  for (int j = 3; j <= n - 2; ++j) needed.push_back(family.phi(j));
  for (std::size_t idx : needed) {
    if (!displays_character(tree, family.matrix[idx])) {
      throw DomainError("precondition violated: tree does not display " +
                        family.matrix[idx].name());
    }
  }
}

}  // namespace

std::vector<LemmaReport> verify_witness_suite(int n) {
  require_even(n, 4);
  return verify_witness_suite(counterexample(n));
}

std::vector<LemmaReport> verify_witness_suite(const FamilyInstance& family) {
  require_even(family.n, 4);
  suite_display_checks = 0;
  std::vector<LemmaReport> reports;
  for (auto& w : named_witnesses(family)) {
    LemmaReport report;
    report.id = "witness:" + w.name;
    report.n = family.n;
    Trace trace(report);
    const std::string& target = family.matrix[w.excluded].name();
    for (std::size_t c = 0; c < family.matrix.size(); ++c) {
      const Character& ch = family.matrix[c];
      const bool shown = displays_character(w.tree, ch);
      ++suite_display_checks;
      if (c == w.excluded) {
        trace.check(!shown, w.name + " fails " + ch.name());
      } else {
        trace.check(shown, w.name + " displays " + ch.name());
      }
    }
    report.pass = trace.ok();
    report.evidence = report.pass ? w.name + " displays C\\{" + target + "} and fails " + target
                                  : "check failed: " + trace.first_failure();
    report.witness = std::move(w.tree);
    reports.push_back(std::move(report));
  }
  return reports;
}

std::uint64_t last_suite_display_checks() { return suite_display_checks; }

SmallExampleCounts count_small_example() {
  const FamilyInstance family = counterexample(4);
  const std::size_t m = family.matrix.size();
  const unsigned full = (1u << m) - 1;

  // The designated witness for each left-out character, indexed like the matrix.
  std::vector<std::vector<Split>> lobster_splits(m);
  lobster_splits[family.omega_a()] = splits(lobster_b(4));
  lobster_splits[family.chi(2)] = splits(lobster_a_cross_b(4, 2));
  lobster_splits[family.phi(3)] = splits(lobster_a_jagged_b(4, 3));
  lobster_splits[family.omega_b()] = splits(lobster_a(4));

  SmallExampleCounts counts;
  counts.leave_one_out.assign(m, 0);
  counts.lobster_found.assign(m, false);
  counts.trees = for_each_binary_tree(
      family.matrix.taxa_ptr(), family.taxa().all(), [&](const Tree& tree) {
        unsigned mask = 0;
        for (std::size_t c = 0; c < m; ++c) {
          if (displays_character(tree, family.matrix[c])) mask |= 1u << c;
        }
        if (mask == full) ++counts.full_set;
        for (std::size_t c = 0; c < m; ++c) {
          const unsigned wanted = full & ~(1u << c);
          if ((mask & wanted) != wanted) continue;
          ++counts.leave_one_out[c];
          if (!counts.lobster_found[c] && splits(tree) == lobster_splits[c]) {
            counts.lobster_found[c] = true;
          }
        }
        return true;
      });
  return counts;
}

LemmaReport verify_small(int n) {
  if (n != 4) throw DomainError("the small example is defined for n = 4 only");
  const FamilyInstance family = counterexample(4);
  const auto counts = count_small_example();
  LemmaReport report;
  report.id = "small-example";
  report.n = 4;
  Trace trace(report);
  trace.check(counts.trees == binary_tree_count(8),
              "enumerated " + std::to_string(counts.trees) + " binary trees on 8 taxa");
  trace.check(counts.full_set == 0,
              std::to_string(counts.full_set) + " trees display all four characters");
  static const char* const kNames[] = {"T1=B", "T2=A_2B", "T3=A^3B", "T4=A"};
  for (std::size_t c = 0; c < family.matrix.size(); ++c) {
    trace.check(counts.leave_one_out[c] > 0,
                std::to_string(counts.leave_one_out[c]) + " trees display all but " +
                    family.matrix[c].name());
    trace.check(counts.lobster_found[c],
                std::string(kNames[c]) + " found among them");
  }
  report.pass = trace.ok();
  std::ostringstream ev;
  ev << "exhaustive trees=" << counts.trees << " full=" << counts.full_set << " leave_one_out=";
  for (std::size_t c = 0; c < counts.leave_one_out.size(); ++c) {
    ev << (c ? "/" : "") << counts.leave_one_out[c];
  }
  report.evidence = ev.str();
  return report;
}

Quartet chain_quartet(const TaxonSet& taxa, int i) {
  const int n = taxa.structured_n();
  if (n == 0) throw DomainError("chain quartets need a structured taxon set");
  if (i < 3 || i > n - 2) throw DomainError("Q_i is defined for 3 <= i <= n-2");
  if (i % 2 == 0) {
    return Quartet{subset_union(taxa.x_le(i - 1), {taxa.b(i)}), {taxa.b(i + 1)}, {taxa.a(i)},
                   {taxa.a(i + 1)}};
  }
  return Quartet{subset_union(taxa.x_le(i - 1), {taxa.a(i)}), {taxa.a(i + 1)}, {taxa.b(i)},
                 {taxa.b(i + 1)}};
}

LemmaReport verify_quartet_chain(const Tree& tree, int n) {
  require_even(n, 6);
  const FamilyInstance family = counterexample(n);
  require_chain_precondition(tree, family);
  const TaxonSet& x = family.taxa();

  LemmaReport report;
  report.id = "quartet-chain";
  report.n = n;
  Trace trace(report);

  auto set = [&](std::initializer_list<TaxonId> ids) { return make_subset(ids); };
  auto name = [&](VertexId v) { return vertex_label(tree, v); };
  auto leaf = [&](TaxonId t) { return tree.leaf_vertex(t); };
  // Records meet(t, sub) and whether it lies on the from-to path.
  auto meet_step = [&](TaxonId t, const TaxonSubset& sub, VertexId from, VertexId to,
                       const std::string& sub_name) {
    const VertexId m = meets(tree, t, sub).vertex;
    const bool between = meets_between(tree, t, sub, from, to);
    trace.check(between, x.label(t) + " meets T[" + sub_name + "] at " + name(m) + " between " +
                             name(from) + " and " + name(to));
    return std::make_pair(m, between);
  };

  auto stop = [&] {
    report.pass = false;
    report.evidence = trace.first_failure();
    return report;
  };

  // Base case.
  const VertexId u1 = meets(tree, x.a(2), set({x.a(1), x.b(1), x.b(2)})).vertex;
  trace.note("a2 meets T[{a1,b1,b2}] at " + name(u1));
  auto [u2, ok2] = meet_step(x.b(3), set({x.a(1), x.b(1), x.a(2), x.b(2)}), u1, leaf(x.a(2)),
                             "{a1,b1,a2,b2}");
  if (!ok2) return stop();
  auto [v2, okv2] = meet_step(x.a(3), set({x.a(1), x.b(1), x.a(2), x.b(2), x.b(3)}), u2,
                              leaf(x.a(2)), "{a1,b1,a2,b2,b3}");
  if (!okv2) return stop();
  auto [v3, okv3] = meet_step(x.b(4), x.x_le(3), u2, leaf(x.b(3)), "X<=3");
  if (!okv3) return stop();
  auto [u3, oku3] = meet_step(x.a(4), subset_union(x.x_le(3), {x.b(4)}), u2, v3, "X<=3+b4");
  if (!oku3) return stop();

  VertexId u = u3;
  VertexId v = v3;
  Quartet q = chain_quartet(x, 3);
  trace.check(displays_quartet_at(tree, q, u, v),
              "Q3 " + format_quartet(q, x) + " at (" + name(u) + "," + name(v) + ")");

  for (int i = 4; i <= n - 2; ++i) {
    // Even steps attach a_{i+1} then b_{i+1}; odd steps swap the letters.
    const bool even = i % 2 == 0;
    const TaxonId first = even ? x.a(i + 1) : x.b(i + 1);
    const TaxonId second = even ? x.b(i + 1) : x.a(i + 1);
    const TaxonId anchor = even ? x.a(i) : x.b(i);
    const std::string le = "X<=" + std::to_string(i);
    auto [vi, okv] = meet_step(first, x.x_le(i), u, leaf(anchor), le);
    if (!okv) break;
    auto [ui, oku] = meet_step(second, subset_union(x.x_le(i), {first}), u, vi,
                               le + "+" + x.label(first));
    if (!oku) break;
    u = ui;
    v = vi;
    q = chain_quartet(x, i);
    trace.check(displays_quartet_at(tree, q, u, v), "Q" + std::to_string(i) + " " +
                                                        format_quartet(q, x) + " at (" + name(u) +
                                                        "," + name(v) + ")");
  }

  // Independent of the traced vertices: every Q_i is displayed by some pair.
  for (int i = 3; i <= n - 2; ++i) {
    trace.check(displays_quartet(tree, chain_quartet(x, i)),
                "Q" + std::to_string(i) + " displayed");
  }

  report.pass = trace.ok();
  report.evidence = report.pass ? "Q3..Q" + std::to_string(n - 2) + " traced, final " +
                                      format_quartet(chain_quartet(x, n - 2), x)
                                : trace.first_failure();
  return report;
}

LemmaReport verify_omega_conflict(const Tree& tree, int n) {
  require_even(n, 6);
  const FamilyInstance family = counterexample(n);
  const TaxonSet& x = family.taxa();
  if (!(tree.taxa() == x)) throw DomainError("tree is not defined over the family's taxon set");
  const Quartet q = chain_quartet(x, n - 2);
  const auto pair = find_quartet_display(tree, q);
  if (!pair) throw DomainError("precondition violated: final chain quartet is not displayed");
  const auto [u, v] = *pair;

  LemmaReport report;
  report.id = "omega-conflict";
  report.n = n;
  Trace trace(report);
  trace.note("final quartet at (" + tree.vertex_name(u) + "," + tree.vertex_name(v) + ")");

  const Character& phi = family.matrix[family.phi(n - 1)];
  const Character& omega = family.matrix[family.omega_b()];
  const bool shows_phi = displays_character(tree, phi);
  const bool shows_omega = displays_character(tree, omega);
  const TaxonSubset prefix = x.x_le(n - 1);
  const VertexId joint = meets(tree, x.b(n), prefix).vertex;
  trace.note("bn meets T[X<=" + std::to_string(n - 1) + "] at " + tree.vertex_name(joint));
  if (shows_phi) {
    trace.check(meets_between(tree, x.b(n), prefix, u, tree.leaf_vertex(x.b(n - 1))),
                phi.name() + " displayed: bn joins between " + tree.vertex_name(u) + " and b" +
                    std::to_string(n - 1));
  }
  if (shows_omega) {
    trace.check(meets_between(tree, x.b(n), prefix, v, tree.leaf_vertex(x.a(n - 1))),
                omega.name() + " displayed: bn joins between " + tree.vertex_name(v) + " and a" +
                    std::to_string(n - 1));
  }
  trace.check(!(shows_phi && shows_omega), "not both " + phi.name() + " and " + omega.name());
  report.pass = trace.ok();
  if (!report.pass) {
    report.evidence = trace.first_failure();
  } else if (!shows_phi && !shows_omega) {
    report.evidence = "fails " + phi.name() + " and " + omega.name();
  } else {
    report.evidence = "fails " + (shows_phi ? omega.name() : phi.name());
  }
  return report;
}

LemmaReport verify_incompatibility_by_chain(int n, const SearchOptions& options) {
  require_even(n, 6);
  const FamilyInstance family = counterexample(n);
  LemmaReport report;
  report.id = "incompatibility";
  report.n = n;
  Trace trace(report);

  SearchOptions search = options;
  if (search.mode == SearchMode::Auto) search.mode = SearchMode::BranchAndBound;
  if (search.insertion_order.empty()) {
    for (int i = 1; i <= n; ++i) {
      search.insertion_order.push_back(family.taxa().a(i));
      search.insertion_order.push_back(family.taxa().b(i));
    }
  }
  const Verdict verdict = decide_pp(family.matrix, search);
  trace.check(verdict.incompatible(),
              "search verdict " + to_string(verdict.status) + " after " +
                  std::to_string(verdict.stats.trees_explored) + " nodes");

  const TreeList trees =
      enumerate_compatible_trees(family.matrix.without(family.omega_b()), kNoLimit, search);
  trace.check(trees.complete, "enumeration of C\\{Omega_B} trees complete");
  trace.check(!trees.trees.empty(),
              std::to_string(trees.trees.size()) + " binary trees display C\\{Omega_B}");
  std::size_t chain_ok = 0;
  std::size_t conflict_ok = 0;
  std::size_t omega_fail = 0;
  for (const Tree& t : trees.trees) {
    if (verify_quartet_chain(t, n).pass) ++chain_ok;
    if (verify_omega_conflict(t, n).pass) ++conflict_ok;
    if (!displays_character(t, family.matrix[family.omega_b()])) ++omega_fail;
  }
  const std::string total = std::to_string(trees.trees.size());
  trace.check(chain_ok == trees.trees.size(),
              std::to_string(chain_ok) + "/" + total + " pass the quartet chain");
  trace.check(conflict_ok == trees.trees.size(),
              std::to_string(conflict_ok) + "/" + total + " pass the omega conflict");
  trace.check(omega_fail == trees.trees.size(),
              std::to_string(omega_fail) + "/" + total + " fail Omega_B");
  report.pass = trace.ok();
  report.evidence = report.pass ? "search-certified; " + total +
                                      " C\\{Omega_B} trees all chain-checked and fail Omega_B"
                                : trace.first_failure();
  return report;
}

LemmaReport verify_theorem(int n, int t, const SearchOptions& options) {
  require_even(n, 4);
  if (t < 0 || t >= 2 * n - 4) {
    throw DomainError("t must satisfy 0 <= t < 2n-4 = " + std::to_string(2 * n - 4));
  }
  LemmaReport report;
  report.id = "theorem";
  report.n = n;
  Trace trace(report);
  std::string incompat;
  if (n == 4) {
    const auto small = verify_small(4);
    trace.check(small.pass, "small example: " + small.evidence);
    incompat = "search-certified";
  } else {
    if (n <= 6) {
      const auto chain = verify_incompatibility_by_chain(n, options);
      trace.check(chain.pass, "incompatibility: " + chain.evidence);
      incompat = "search-certified";
    } else {
      incompat = "incompatibility certified only at n <= 6, witness-checked at this n";
    }
    std::size_t passed = 0;
    const auto suite = verify_witness_suite(n);
    for (const auto& r : suite) passed += r.pass ? 1 : 0;
    trace.check(passed == suite.size(), std::to_string(passed) + "/" +
                                            std::to_string(suite.size()) +
                                            " leave-one-out witnesses pass");
  }
  report.pass = trace.ok();
  report.evidence = report.pass ? "t=" + std::to_string(t) + " " + incompat
                                : trace.first_failure();
  return report;
}

Level parse_level(std::string_view text) {
  if (text == "witnesses") return Level::Witnesses;
  if (text == "full") return Level::Full;
  throw DomainError("unknown level '" + std::string(text) + "' (expected witnesses or full)");
}

std::vector<LemmaReport> verify_paper(int n, Level level, const SearchOptions& options) {
  require_even(n, 4);
  std::vector<LemmaReport> reports = verify_witness_suite(n);
  if (level == Level::Witnesses) return reports;
  if (n == 4) {
    reports.push_back(verify_small(4));
  } else {
    const Tree a = lobster_a(n);
    reports.push_back(verify_quartet_chain(a, n));
    reports.push_back(verify_omega_conflict(a, n));
    if (n <= 6) reports.push_back(verify_incompatibility_by_chain(n, options));
  }
  reports.push_back(verify_theorem(n, 2 * n - 5, options));
  return reports;
}

std::string format_report_line(const LemmaReport& report) {
  return "id=" + report.id + " n=" + std::to_string(report.n) +
         " status=" + (report.pass ? "pass" : "fail") + " evidence=" + report.evidence;
}

}  // namespace phylocompat::verify
