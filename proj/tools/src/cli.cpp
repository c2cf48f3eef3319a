#include "phylocompat_cli/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "phylocompat/construction.hpp"
#include "phylocompat/display.hpp"
#include "phylocompat/io.hpp"
#include "phylocompat/solver.hpp"
#include "phylocompat/verify.hpp"

namespace phylocompat::cli {

namespace {

constexpr const char* kBudgetEnv = "PHYLOCOMPAT_BUDGET";

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  file << text;
}

std::uint64_t parse_budget(const std::string& text, const std::string& source) {
  std::size_t used = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || text.front() == '-') {
    throw DomainError(source + " must be a non-negative integer, got '" + text + "'");
  }
  return value;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct SearchFlags {
  std::string mode = "auto";
  std::string budget;

  void attach(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "auto, exhaustive or branch-and-bound");
    cmd->add_option("--budget", budget, "search-node budget (default from $PHYLOCOMPAT_BUDGET)");
  }

  SearchOptions resolve() const {
    SearchOptions options;
    options.mode = parse_search_mode(mode);
    if (!budget.empty()) {
      options.node_budget = parse_budget(budget, "--budget");
    } else if (const char* env = std::getenv(kBudgetEnv); env && *env) {
      options.node_budget = parse_budget(env, kBudgetEnv);
    }
    return options;
  }
};

void print_stats(std::ostream& out, const SearchStats& stats) {
  out << "trees_explored=" << stats.trees_explored << "\n";
  out << "prunes=" << stats.prunes << "\n";
  out << "wall_time_s=" << std::fixed << std::setprecision(6) << stats.wall_time.count()
      << std::defaultfloat << "\n";
}

CharacterMatrix generate(const std::string& kind, int n) {
  if (kind == "counterexample") return counterexample(n).matrix;
  if (kind == "small8") return counterexample(4).matrix;
  if (kind == "fitch") return fitch_example();
  throw DomainError("unknown kind '" + kind + "' (expected counterexample, fitch or small8)");
}

std::string join_names(const CharacterMatrix& matrix, const std::vector<std::size_t>& subset) {
  std::string line;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i) line += ' ';
    line += matrix[subset[i]].name();
  }
  return line;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Perfect phylogeny compatibility checker", "phylocompat"};
  app.require_subcommand(1);
  int code = kError;

  // generate
  auto* gen = app.add_subcommand("generate", "write a canned or generated matrix");
  std::string kind = "counterexample";
  int n = 6;
  bool gen_gapify = false;
  std::string dup_taxon;
  int dup_copies = 1;
  std::string gen_out;
  gen->add_option("--kind", kind, "counterexample, fitch or small8");
  gen->add_option("--n", n, "family size (even, >= 4)");
  gen->add_flag("--gapify", gen_gapify, "turn singleton states into gaps");
  gen->add_option("--duplicate", dup_taxon, "taxon to copy");
  gen->add_option("--copies", dup_copies, "number of copies for --duplicate");
  gen->add_option("--out", gen_out, "output file (default stdout)");
  gen->callback([&] {
    CharacterMatrix m = generate(kind, n);
    if (!dup_taxon.empty()) m = duplicate_taxon(m, dup_taxon, dup_copies);
    if (gen_gapify) m = gapify(m);
    write_text(gen_out, serialize_matrix(m), out);
    code = 0;
  });

  // decide
  auto* dec = app.add_subcommand("decide", "decide compatibility of a matrix");
  std::string dec_matrix;
  std::string dec_out;
  std::size_t dec_limit = 0;
  SearchFlags dec_flags;
  dec->add_option("matrix", dec_matrix, "matrix file")->required();
  dec->add_option("--out", dec_out, "write the witness (or the enumerated trees) as Newick");
  dec->add_option("--limit", dec_limit, "enumerate up to this many compatible trees");
  dec_flags.attach(dec);
  dec->callback([&] {
    const CharacterMatrix m = parse_matrix(read_text(dec_matrix));
    const SearchOptions options = dec_flags.resolve();
    if (dec_limit > 0) {
      const TreeList list = enumerate_compatible_trees(m, dec_limit, options);
      std::string text;
      for (const Tree& t : list.trees) text += serialize_newick(t) + "\n";
      if (list.budget_exceeded) {
        out << "status=undecided\nreason=budget\n";
        code = kUndecided;
      } else {
        const bool any = !list.trees.empty();
        out << "status=" << (any ? "compatible" : "incompatible") << "\n";
        out << "reason=exhausted-search\n";
        code = any ? kCompatible : kIncompatible;
      }
      out << "trees=" << list.trees.size() << "\n";
      out << "complete=" << (list.complete ? "true" : "false") << "\n";
      print_stats(out, list.stats);
      if (dec_out.empty()) {
        for (const Tree& t : list.trees) out << "tree=" << serialize_newick(t) << "\n";
      } else {
        write_text(dec_out, text, out);
      }
      return;
    }
    const Verdict v = decide_pp(m, options);
    out << "status=" << lower(to_string(v.status)) << "\n";
    out << "reason=" << v.reason << "\n";
    out << "mode=" << to_string(v.mode_used) << "\n";
    print_stats(out, v.stats);
    if (v.witness) {
      const std::string nwk = serialize_newick(*v.witness);
      out << "witness=" << nwk << "\n";
      if (!dec_out.empty()) write_text(dec_out, nwk + "\n", out);
    }
    code = v.compatible() ? kCompatible : v.incompatible() ? kIncompatible : kUndecided;
  });

  // check
  auto* chk = app.add_subcommand("check", "report which characters a tree displays");
  std::string chk_matrix;
  std::string chk_tree;
  chk->add_option("matrix", chk_matrix, "matrix file")->required();
  chk->add_option("tree", chk_tree, "Newick file, one tree per line")->required();
  chk->callback([&] {
    const CharacterMatrix m = parse_matrix(read_text(chk_matrix));
    const auto trees = parse_newick_lines(read_text(chk_tree), m.taxa_ptr());
    if (trees.empty()) throw DomainError("no tree in '" + chk_tree + "'");
    bool all = true;
    for (std::size_t k = 0; k < trees.size(); ++k) {
      const std::string prefix = trees.size() > 1 ? "tree=" + std::to_string(k + 1) + " " : "";
      std::size_t shown = 0;
      for (const auto& c : m.characters()) {
        const bool ok = displays_character(trees[k], c);
        shown += ok ? 1 : 0;
        out << prefix << c.name() << "\t" << (ok ? "pass" : "fail") << "\n";
      }
      out << prefix << "displayed=" << shown << "/" << m.size() << "\n";
      all = all && shown == m.size();
    }
    code = all ? 0 : 1;
  });

  // obstructions
  auto* obs = app.add_subcommand("obstructions", "list minimal incompatible character subsets");
  std::string obs_matrix;
  std::size_t max_size = 3;
  SearchFlags obs_flags;
  obs->add_option("matrix", obs_matrix, "matrix file")->required();
  obs->add_option("--max-size", max_size, "largest subset size to examine");
  obs_flags.attach(obs);
  obs->callback([&] {
    const CharacterMatrix m = parse_matrix(read_text(obs_matrix));
    const ObstructionList list = minimal_obstructions(m, max_size, obs_flags.resolve());
    for (const auto& o : list.obstructions) out << join_names(m, o.subset) << "\n";
    err << "obstructions=" << list.obstructions.size()
        << " complete=" << (list.complete ? "true" : "false") << " decisions=" << list.decisions
        << "\n";
    code = list.complete ? 0 : kUndecided;
  });

  // verify-paper
  auto* ver = app.add_subcommand("verify-paper", "check the counterexample family claims");
  int ver_n = 6;
  std::string level = "witnesses";
  bool transcript = false;
  SearchFlags ver_flags;
  ver->add_option("--n", ver_n, "family size (even, >= 4)");
  ver->add_option("--level", level, "witnesses or full");
  ver->add_flag("--transcript", transcript, "print every individual check");
  ver_flags.attach(ver);
  ver->callback([&] {
    const auto reports = verify::verify_paper(ver_n, verify::parse_level(level), ver_flags.resolve());
    std::size_t failed = 0;
    for (const auto& r : reports) {
      out << verify::format_report_line(r) << "\n";
      if (transcript) {
        for (const auto& line : r.transcript) out << "    " << line << "\n";
      }
      failed += r.pass ? 0 : 1;
    }
    out << "reports=" << reports.size() << " failed=" << failed << "\n";
    code = failed == 0 ? 0 : 1;
  });

  // gapify
  auto* gap = app.add_subcommand("gapify", "replace singleton states by gaps");
  std::string gap_matrix;
  std::string gap_out;
  gap->add_option("matrix", gap_matrix, "matrix file")->required();
  gap->add_option("--out", gap_out, "output file (default stdout)");
  gap->callback([&] {
    write_text(gap_out, serialize_matrix(gapify(parse_matrix(read_text(gap_matrix)))), out);
    code = 0;
  });

  // duplicate
  auto* dup = app.add_subcommand("duplicate", "add copies of a taxon");
  std::string dup_matrix;
  std::string dup_name;
  int copies = 1;
  std::string dup_out;
  dup->add_option("matrix", dup_matrix, "matrix file")->required();
  dup->add_option("--taxon", dup_name, "taxon to copy")->required();
  dup->add_option("--copies", copies, "number of copies");
  dup->add_option("--out", dup_out, "output file (default stdout)");
  dup->callback([&] {
    const CharacterMatrix m = parse_matrix(read_text(dup_matrix));
    write_text(dup_out, serialize_matrix(duplicate_taxon(m, dup_name, copies)), out);
    code = 0;
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  return code;
}

}  // namespace phylocompat::cli
