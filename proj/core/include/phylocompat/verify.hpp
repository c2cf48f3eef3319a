#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phylocompat/construction.hpp"
#include "phylocompat/display.hpp"
#include "phylocompat/solver.hpp"

namespace phylocompat::verify {

/// Outcome of one mechanically checked claim about the family.
struct LemmaReport {
  std::string id;
  int n = 0;
  bool pass = false;
  /// Short pointer to the evidence: witness name, failing character, counts.
  std::string evidence;
  /// Line-by-line record of the individual checks behind the verdict.
  std::vector<std::string> transcript;
  std::optional<Tree> witness;
};

/// Each named witness tree displays every character of C(n) but its own and
/// fails that one: A (Omega_B), B (Omega_A), A_iB (chi_i), A^iB (phi_i).
/// Requires even n >= 4.
std::vector<LemmaReport> verify_witness_suite(int n);
/// Runs the same suite against a caller-supplied (possibly perturbed) family.
std::vector<LemmaReport> verify_witness_suite(const FamilyInstance& family);

/// Number of displays_character calls made by the last witness suite run on
/// this thread.
std::uint64_t last_suite_display_checks();

/// Eight-taxon example, settled by enumerating all 10395 binary trees.
struct SmallExampleCounts {
  std::uint64_t trees = 0;
  std::uint64_t full_set = 0;
  /// Trees displaying all characters but the one at each index.
  std::vector<std::uint64_t> leave_one_out;
  /// Whether each named lobster witness appears among those trees.
  std::vector<bool> lobster_found;
};
SmallExampleCounts count_small_example();
LemmaReport verify_small(int n = 4);

/// Q_i for 3 <= i <= n-2: for even i, X_le(i-1)+b_i | b_{i+1} || a_i | a_{i+1};
/// for odd i, X_le(i-1)+a_i | a_{i+1} || b_i | b_{i+1}.
Quartet chain_quartet(const TaxonSet& taxa, int i);

/// Walks the base case and the induction steps on a tree displaying
/// C(n) minus {phi_{n-1}, Omega_B}, checking every meet-point claim and every
/// quartet along the way. Throws DomainError if the tree violates the
/// precondition.
LemmaReport verify_quartet_chain(const Tree& tree, int n);

/// For a tree displaying the final chain quartet: it fails phi_{n-1} or
/// Omega_B. Throws DomainError if the quartet is not displayed.
LemmaReport verify_omega_conflict(const Tree& tree, int n);

/// Incompatibility of C(n) at n = 6 by search plus a chain/conflict check of
/// every tree compatible with C minus Omega_B.
LemmaReport verify_incompatibility_by_chain(int n, const SearchOptions& options = {});

/// C(n) incompatible while every subset of at most t characters is
/// compatible. Requires t < 2n - 4.
LemmaReport verify_theorem(int n, int t, const SearchOptions& options = {});

enum class Level { Witnesses, Full };
Level parse_level(std::string_view text);

/// Everything cmd verify-paper runs for a given n and depth.
std::vector<LemmaReport> verify_paper(int n, Level level, const SearchOptions& options = {});

/// "id=<id> n=<n> status=<pass|fail> evidence=<...>"
std::string format_report_line(const LemmaReport& report);

}  // namespace phylocompat::verify
