#include "phylocompat/solver.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <stdexcept>

#include "phylocompat/display.hpp"

namespace phylocompat {

std::string to_string(SearchMode mode) {
  switch (mode) {
    case SearchMode::Exhaustive: return "exhaustive";
    case SearchMode::BranchAndBound: return "branch-and-bound";
    case SearchMode::Auto: return "auto";
  }
  return "auto";
}

SearchMode parse_search_mode(std::string_view text) {
  if (text == "exhaustive") return SearchMode::Exhaustive;
  if (text == "branch-and-bound" || text == "bnb") return SearchMode::BranchAndBound;
  if (text == "auto") return SearchMode::Auto;
  throw DomainError("unknown search mode '" + std::string(text) + "'");
}

std::string to_string(Status status) {
  switch (status) {
    case Status::Compatible: return "Compatible";
    case Status::Incompatible: return "Incompatible";
    case Status::Undecided: return "Undecided";
  }
  return "Undecided";
}

std::uint64_t binary_tree_count(std::size_t leaves) {
  std::uint64_t out = 1;
  for (std::size_t k = 4; k <= leaves; ++k) out *= 2 * k - 5;
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

/// Binary tree grown by inserting leaves into edges, rooted at the first
/// leaf. Edges are stored as (parent, child) so insertions and undos keep
/// parent pointers valid.
class GrowingTree {
 public:
  explicit GrowingTree(std::size_t universe) : taxon_vertex_(universe, -1) {}

  void start(TaxonId t0, TaxonId t1, TaxonId t2) {
    parent_.clear();
    vertex_taxon_.clear();
    edges_.clear();
    history_.clear();
    std::fill(taxon_vertex_.begin(), taxon_vertex_.end(), -1);
    const int r = add(static_cast<int>(t0), -1);
    const int c = add(-1, r);
    const int l1 = add(static_cast<int>(t1), c);
    const int l2 = add(static_cast<int>(t2), c);
    edges_ = {{r, c}, {c, l1}, {c, l2}};
  }

  std::size_t edge_count() const { return edges_.size(); }
  std::size_t vertex_count() const { return parent_.size(); }
  int parent(int v) const { return parent_[static_cast<std::size_t>(v)]; }
  int vertex_of(TaxonId t) const { return taxon_vertex_[t]; }

  void insert(std::size_t edge, TaxonId taxon) {
    auto [p, c] = edges_[edge];
    const int w = add(-1, p);
    const int l = add(static_cast<int>(taxon), w);
    parent_[static_cast<std::size_t>(c)] = w;
    edges_[edge] = {p, w};
    edges_.push_back({w, c});
    edges_.push_back({w, l});
    history_.push_back(edge);
  }

  void undo() {
    const std::size_t edge = history_.back();
    history_.pop_back();
    const int p = edges_[edge].first;
    const int c = edges_[edges_.size() - 2].second;
    edges_[edge] = {p, c};
    edges_.pop_back();
    edges_.pop_back();
    parent_[static_cast<std::size_t>(c)] = p;
    taxon_vertex_[static_cast<std::size_t>(vertex_taxon_.back())] = -1;
    parent_.pop_back();
    parent_.pop_back();
    vertex_taxon_.pop_back();
    vertex_taxon_.pop_back();
  }

  Tree materialize(const std::shared_ptr<const TaxonSet>& taxa) const {
    TreeBuilder builder(taxa);
    std::vector<VertexId> ids(parent_.size());
    for (std::size_t v = 0; v < parent_.size(); ++v) {
      ids[v] = vertex_taxon_[v] >= 0 ? builder.add_leaf(static_cast<TaxonId>(vertex_taxon_[v]))
                                     : builder.add_vertex();
    }
    for (auto [p, c] : edges_) {
      builder.add_edge(ids[static_cast<std::size_t>(p)], ids[static_cast<std::size_t>(c)]);
    }
    return std::move(builder).build();
  }

 private:
  int add(int taxon, int parent) {
    const int v = static_cast<int>(parent_.size());
    parent_.push_back(parent);
    vertex_taxon_.push_back(taxon);
    if (taxon >= 0) taxon_vertex_[static_cast<std::size_t>(taxon)] = v;
    return v;
  }

  std::vector<int> parent_;
  std::vector<int> vertex_taxon_;
  std::vector<int> taxon_vertex_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::size_t> history_;
};

std::vector<TaxonId> resolve_order(const TaxonSubset& leaves, const std::vector<TaxonId>& order) {
  if (order.empty()) return leaves;
  if (make_subset(order) != leaves || order.size() != leaves.size()) {
    throw DomainError("insertion order must be a permutation of the taxa");
  }
  return order;
}

/// Stepwise-addition search over binary trees. With pruning enabled a
/// partial tree is abandoned as soon as it fails to display the matrix
/// restricted to its leaves.
class InsertionSearch {
 public:
  using Visitor = std::function<bool(const GrowingTree&)>;

  InsertionSearch(const CharacterMatrix& matrix, std::vector<TaxonId> order, bool prune,
                  std::uint64_t budget)
      : order_(std::move(order)),
        prune_(prune),
        budget_(budget),
        tree_(matrix.taxa().size()) {
    if (prune_) prepare(matrix);
  }

  /// Returns false if the visitor stopped the search or the budget ran out.
  bool run(const Visitor& visit) {
    visit_ = &visit;
    tree_.start(order_[0], order_[1], order_[2]);
    if (prune_ && !consistent(3)) {
      ++stats_.prunes;
      return true;
    }
    return descend(3);
  }

  bool budget_exceeded() const { return exceeded_; }
  const SearchStats& stats() const { return stats_; }

 private:
  struct Restricted {
    std::vector<std::vector<TaxonId>> states;
  };

  void prepare(const CharacterMatrix& matrix) {
    const std::size_t n = order_.size();
    std::vector<std::size_t> position(matrix.taxa().size(), n);
    for (std::size_t i = 0; i < n; ++i) position[order_[i]] = i;
    levels_.assign(n + 1, {});
    for (std::size_t k = 3; k <= n; ++k) {
      const TaxonId newest = order_[k - 1];
      for (const auto& character : matrix.characters()) {
        Restricted r;
        bool touches_newest = k == 3;
        for (const auto& state : character.states()) {
          std::vector<TaxonId> present;
          for (TaxonId t : state) {
            if (position[t] < k) present.push_back(t);
          }
          if (present.size() < 2) continue;
          if (std::find(present.begin(), present.end(), newest) != present.end()) {
            touches_newest = true;
          }
          r.states.push_back(std::move(present));
        }
        // Inserting a leaf that is gapped or alone in its state cannot make
        // two previously disjoint spanning subtrees meet.
        if (touches_newest && r.states.size() >= 2) levels_[k].push_back(std::move(r));
      }
    }
    count_.assign(2 * n, 0);
    owner_.assign(2 * n, 0);
    stamp_.assign(2 * n, 0);
  }

  bool consistent(std::size_t k) {
    for (const auto& r : levels_[k]) {
      ++current_;
      for (std::size_t s = 0; s < r.states.size(); ++s) {
        if (!claim(r.states[s], static_cast<int>(s))) return false;
      }
    }
    return true;
  }

  // Marks the spanning subtree of `state` with owner `s`; false on collision.
  bool claim(const std::vector<TaxonId>& state, int s) {
    const int size = static_cast<int>(state.size());
    for (TaxonId t : state) {
      for (int v = tree_.vertex_of(t); v >= 0; v = tree_.parent(v)) ++count_[static_cast<std::size_t>(v)];
    }
    bool ok = true;
    int lca = tree_.vertex_of(state[0]);
    while (count_[static_cast<std::size_t>(lca)] != size) lca = tree_.parent(lca);
    auto mark = [&](int v) {
      auto u = static_cast<std::size_t>(v);
      if (stamp_[u] == current_ && owner_[u] != s) ok = false;
      stamp_[u] = current_;
      owner_[u] = s;
    };
    for (TaxonId t : state) {
      for (int v = tree_.vertex_of(t); v >= 0; v = tree_.parent(v)) {
        auto u = static_cast<std::size_t>(v);
        if (count_[u] == 0) break;
        if (count_[u] < size) mark(v);
        count_[u] = 0;
      }
    }
    mark(lca);
    // Counts above the first zeroed vertex were already cleared by an earlier walk.
    return ok;
  }

  bool descend(std::size_t k) {
    if (++stats_.trees_explored > budget_) {
      exceeded_ = true;
      return false;
    }
    if (k == order_.size()) return (*visit_)(tree_);
    const std::size_t edges = tree_.edge_count();
    for (std::size_t e = 0; e < edges; ++e) {
      tree_.insert(e, order_[k]);
      bool keep_going = true;
      if (!prune_ || consistent(k + 1)) {
        keep_going = descend(k + 1);
      } else {
        ++stats_.prunes;
      }
      tree_.undo();
      if (!keep_going) return false;
    }
    return true;
  }

  std::vector<TaxonId> order_;
  bool prune_;
  std::uint64_t budget_;
  GrowingTree tree_;
  std::vector<std::vector<Restricted>> levels_;
  std::vector<int> count_;
  std::vector<int> owner_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t current_ = 0;
  const Visitor* visit_ = nullptr;
  bool exceeded_ = false;
  SearchStats stats_;
};

Tree small_tree(const std::shared_ptr<const TaxonSet>& taxa, const TaxonSubset& leaves) {
  return tree_from_splits(taxa, leaves, {});
}

Verdict finish(Verdict v, const CharacterMatrix& matrix, Clock::time_point start) {
  v.stats.wall_time = Clock::now() - start;
  if (v.witness) {
    if (!displays_all(*v.witness, matrix)) {
      throw std::logic_error("search produced a witness that fails displays_all");
    }
  }
  return v;
}

}  // namespace

std::uint64_t for_each_binary_tree(std::shared_ptr<const TaxonSet> taxa, const TaxonSubset& leaves,
                                   const std::function<bool(const Tree&)>& visit) {
  if (leaves.size() < 3) throw DomainError("binary tree enumeration needs at least 3 taxa");
  CharacterMatrix empty(taxa);
  InsertionSearch search(empty, leaves, false, static_cast<std::uint64_t>(-1));
  std::uint64_t visited = 0;
  search.run([&](const GrowingTree& g) {
    ++visited;
    return visit(g.materialize(taxa));
  });
  return visited;
}

std::vector<Tree> enumerate_binary_trees(std::shared_ptr<const TaxonSet> taxa,
                                         const TaxonSubset& leaves) {
  std::vector<Tree> out;
  for_each_binary_tree(std::move(taxa), leaves, [&](const Tree& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

std::vector<Tree> enumerate_all_trees(std::shared_ptr<const TaxonSet> taxa,
                                      const TaxonSubset& leaves) {
  if (leaves.size() < 4) return {small_tree(taxa, leaves)};
  std::set<std::vector<Split>> seen;
  for_each_binary_tree(taxa, leaves, [&](const Tree& t) {
    const auto sp = splits(t);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << sp.size()); ++mask) {
      std::vector<Split> kept;
      for (std::size_t i = 0; i < sp.size(); ++i) {
        if (mask >> i & 1U) kept.push_back(sp[i]);
      }
      seen.insert(std::move(kept));
    }
    return true;
  });
  std::vector<Tree> out;
  out.reserve(seen.size());
  for (const auto& s : seen) out.push_back(tree_from_splits(taxa, leaves, s));
  return out;
}

Verdict decide_pp(const CharacterMatrix& matrix, const SearchOptions& options) {
  const auto start = Clock::now();
  const TaxonSubset leaves = matrix.taxa().all();
  Verdict v;
  v.mode_used = options.mode;
  if (options.mode == SearchMode::Auto) {
    v.mode_used = leaves.size() <= kAutoExhaustiveMaxTaxa ? SearchMode::Exhaustive
                                                          : SearchMode::BranchAndBound;
  }
  if (leaves.empty()) {
    v.status = Status::Compatible;
    v.reason = "exhausted-search";
    return finish(std::move(v), matrix, start);
  }
  if (leaves.size() < 4) {
    // At most one state can own two of three leaves, so every character fits.
    v.status = Status::Compatible;
    v.reason = "exhausted-search";
    v.witness = small_tree(matrix.taxa_ptr(), leaves);
    v.stats.trees_explored = 1;
    return finish(std::move(v), matrix, start);
  }

  const auto order = resolve_order(leaves, options.insertion_order);
  if (v.mode_used == SearchMode::Exhaustive) {
    CharacterMatrix none(matrix.taxa_ptr());
    InsertionSearch search(none, order, false, options.node_budget);
    search.run([&](const GrowingTree& g) {
      Tree t = g.materialize(matrix.taxa_ptr());
      if (displays_all(t, matrix)) {
        v.witness = std::move(t);
        return false;
      }
      return true;
    });
    v.stats = search.stats();
    if (v.witness) {
      v.status = Status::Compatible;
      v.reason = "exhausted-search";
    } else if (search.budget_exceeded()) {
      v.status = Status::Undecided;
      v.reason = "budget";
    } else {
      v.status = Status::Incompatible;
      v.reason = "exhausted-search";
    }
    return finish(std::move(v), matrix, start);
  }

  InsertionSearch search(matrix, order, true, options.node_budget);
  search.run([&](const GrowingTree& g) {
    v.witness = g.materialize(matrix.taxa_ptr());
    return false;
  });
  v.stats = search.stats();
  if (v.witness) {
    v.status = Status::Compatible;
    v.reason = "exhausted-search";
  } else if (search.budget_exceeded()) {
    v.status = Status::Undecided;
    v.reason = "budget";
  } else {
    v.status = Status::Incompatible;
    v.reason = "exhausted-search";
  }
  return finish(std::move(v), matrix, start);
}

Verdict decide_pp_all_trees(const CharacterMatrix& matrix) {
  const auto start = Clock::now();
  Verdict v;
  v.mode_used = SearchMode::Exhaustive;
  v.reason = "exhausted-search";
  v.status = Status::Incompatible;
  const TaxonSubset leaves = matrix.taxa().all();
  if (leaves.empty()) {
    v.status = Status::Compatible;
    return finish(std::move(v), matrix, start);
  }
  for (auto& t : enumerate_all_trees(matrix.taxa_ptr(), leaves)) {
    ++v.stats.trees_explored;
    if (displays_all(t, matrix)) {
      v.status = Status::Compatible;
      v.witness = std::move(t);
      break;
    }
  }
  return finish(std::move(v), matrix, start);
}

namespace {

void require_full(const Character& c, std::size_t max_states, const char* what) {
  if (!c.is_full()) throw DomainError(std::string(what) + ": character '" + c.name() + "' has gaps");
  if (c.state_count() > max_states) {
    throw DomainError(std::string(what) + ": character '" + c.name() + "' has " +
                      std::to_string(c.state_count()) + " states, at most " +
                      std::to_string(max_states) + " allowed");
  }
}

}  // namespace

bool four_gamete_pair_test(const Character& lhs, const Character& rhs) {
  require_full(lhs, 2, "four-gamete test");
  require_full(rhs, 2, "four-gamete test");
  if (lhs.universe() != rhs.universe()) throw DomainError("characters over different taxon sets");
  std::size_t gametes = 0;
  for (const auto& s : lhs.states()) {
    for (const auto& t : rhs.states()) {
      if (!disjoint(s, t)) ++gametes;
    }
  }
  return gametes < 4;
}

bool binary_matrix_test(const CharacterMatrix& matrix) {
  for (const auto& c : matrix.characters()) require_full(c, 2, "binary matrix test");
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    for (std::size_t j = i + 1; j < matrix.size(); ++j) {
      if (!four_gamete_pair_test(matrix[i], matrix[j])) return false;
    }
  }
  return true;
}

bool triple_test_3state(const CharacterMatrix& matrix, const SearchOptions& options) {
  for (const auto& c : matrix.characters()) require_full(c, 3, "triple test");
  auto compatible = [&](const CharacterMatrix& m) {
    Verdict v = decide_pp(m, options);
    if (v.status == Status::Undecided) throw std::runtime_error("triple test ran out of budget");
    return v.compatible();
  };
  const std::size_t m = matrix.size();
  if (m < 3) return compatible(matrix);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      for (std::size_t k = j + 1; k < m; ++k) {
        if (!compatible(matrix.subset({i, j, k}))) return false;
      }
    }
  }
  return true;
}

namespace {

struct BudgetExhausted {};

/// Compatibility oracle over character subsets with two caches: witness
/// trees found so far (a tree displaying a superset settles the subset) and
/// known obstructions (a superset of one is incompatible).
class SubsetOracle {
 public:
  SubsetOracle(const CharacterMatrix& matrix, const SearchOptions& options)
      : matrix_(matrix), options_(options), remaining_(options.node_budget) {}

  bool compatible(const std::vector<std::size_t>& subset) {
    if (subset.size() <= 1) return true;
    if (auto it = memo_.find(subset); it != memo_.end()) return it->second;
    for (const auto& mask : witness_masks_) {
      if (std::all_of(subset.begin(), subset.end(), [&](std::size_t i) { return mask[i]; })) {
        return memo_[subset] = true;
      }
    }
    for (const auto& o : obstructions_) {
      if (std::includes(subset.begin(), subset.end(), o.begin(), o.end())) {
        return memo_[subset] = false;
      }
    }
    SearchOptions opts = options_;
    opts.node_budget = remaining_;
    Verdict v = decide_pp(matrix_.subset(subset), opts);
    ++decisions_;
    remaining_ -= std::min(remaining_, v.stats.trees_explored);
    if (v.status == Status::Undecided) throw BudgetExhausted{};
    if (v.compatible()) {
      std::vector<char> mask(matrix_.size());
      for (std::size_t i = 0; i < matrix_.size(); ++i) {
        mask[i] = displays_character(*v.witness, matrix_[i]) ? 1 : 0;
      }
      witness_masks_.push_back(std::move(mask));
    }
    return memo_[subset] = v.compatible();
  }

  void add_obstruction(std::vector<std::size_t> subset) { obstructions_.push_back(std::move(subset)); }
  bool contains_obstruction(const std::vector<std::size_t>& subset) const {
    return std::any_of(obstructions_.begin(), obstructions_.end(), [&](const auto& o) {
      return std::includes(subset.begin(), subset.end(), o.begin(), o.end());
    });
  }
  std::uint64_t decisions() const { return decisions_; }

 private:
  const CharacterMatrix& matrix_;
  SearchOptions options_;
  std::uint64_t remaining_;
  std::map<std::vector<std::size_t>, bool> memo_;
  std::vector<std::vector<char>> witness_masks_;
  std::vector<std::vector<std::size_t>> obstructions_;
  std::uint64_t decisions_ = 0;
};

template <typename F>
void for_each_combination(std::size_t m, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == m - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

ObstructionList minimal_obstructions(const CharacterMatrix& matrix, std::size_t max_size,
                                     const SearchOptions& options) {
  ObstructionList out;
  SubsetOracle oracle(matrix, options);
  const std::size_t top = std::min(max_size, matrix.size());
  try {
    for (std::size_t size = 2; size <= top; ++size) {
      for_each_combination(matrix.size(), size, [&](const std::vector<std::size_t>& subset) {
        if (oracle.contains_obstruction(subset)) return;
        std::vector<std::size_t> smaller;
        for (std::size_t drop = 0; drop < subset.size(); ++drop) {
          smaller = subset;
          smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(drop));
          if (!oracle.compatible(smaller)) return;
        }
        if (!oracle.compatible(subset)) {
          oracle.add_obstruction(subset);
          out.obstructions.push_back(Obstruction{subset, true});
        }
      });
    }
  } catch (const BudgetExhausted&) {
    out.complete = false;
  }
  std::sort(out.obstructions.begin(), out.obstructions.end(),
            [](const Obstruction& a, const Obstruction& b) { return a.subset < b.subset; });
  out.decisions = oracle.decisions();
  return out;
}

TreeList enumerate_compatible_trees(const CharacterMatrix& matrix, std::size_t limit,
                                    const SearchOptions& options) {
  const auto start = Clock::now();
  TreeList out;
  const TaxonSubset leaves = matrix.taxa().all();
  if (limit == 0) {
    out.complete = false;
    return out;
  }
  if (leaves.size() < 4) {
    if (!leaves.empty()) out.trees.push_back(small_tree(matrix.taxa_ptr(), leaves));
    return out;
  }
  InsertionSearch search(matrix, resolve_order(leaves, options.insertion_order), true,
                         options.node_budget);
  search.run([&](const GrowingTree& g) {
    if (out.trees.size() == limit) {
      out.complete = false;
      return false;
    }
    out.trees.push_back(g.materialize(matrix.taxa_ptr()));
    return true;
  });
  out.stats = search.stats();
  out.stats.wall_time = Clock::now() - start;
  if (search.budget_exceeded()) {
    out.complete = false;
    out.budget_exceeded = true;
  }
  for (const auto& t : out.trees) {
    if (!displays_all(t, matrix)) throw std::logic_error("enumerated tree fails displays_all");
  }
  std::vector<std::pair<std::vector<Split>, std::size_t>> keyed;
  for (std::size_t i = 0; i < out.trees.size(); ++i) keyed.emplace_back(splits(out.trees[i]), i);
  std::sort(keyed.begin(), keyed.end());
  std::vector<Tree> sorted;
  sorted.reserve(keyed.size());
  for (auto& [key, i] : keyed) sorted.push_back(std::move(out.trees[i]));
  out.trees = std::move(sorted);
  return out;
}

bool canonical_less(const Tree& lhs, const Tree& rhs) { return splits(lhs) < splits(rhs); }

}  // namespace phylocompat
