#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "phylocompat/character.hpp"
#include "phylocompat/tree.hpp"

namespace phylocompat {

enum class SearchMode { Exhaustive, BranchAndBound, Auto };

std::string to_string(SearchMode mode);
SearchMode parse_search_mode(std::string_view text);

inline constexpr std::uint64_t kDefaultNodeBudget = 50'000'000;
/// Auto mode enumerates every binary tree up to this many taxa.
inline constexpr std::size_t kAutoExhaustiveMaxTaxa = 9;

struct SearchOptions {
  SearchMode mode = SearchMode::Auto;
  /// Search-tree nodes (partial and complete trees) visited before giving up.
  std::uint64_t node_budget = kDefaultNodeBudget;
  /// Taxon insertion order; empty means taxon-set order.
  std::vector<TaxonId> insertion_order;
};

struct SearchStats {
  std::uint64_t trees_explored = 0;
  std::uint64_t prunes = 0;
  std::chrono::duration<double> wall_time{0};
};

enum class Status { Compatible, Incompatible, Undecided };
std::string to_string(Status status);

struct Verdict {
  Status status = Status::Undecided;
  std::optional<Tree> witness;
  /// "exhausted-search" for a completed search, "budget" for undecided, or a filter name.
  std::string reason;
  SearchMode mode_used = SearchMode::Auto;
  SearchStats stats;

  bool compatible() const { return status == Status::Compatible; }
  bool incompatible() const { return status == Status::Incompatible; }
};

/// (2k-5)!! for k >= 3; 1 for k < 3.
std::uint64_t binary_tree_count(std::size_t leaves);

/// Calls `visit` once for every unrooted binary tree on `taxa` (|taxa| >= 3),
/// built by stepwise leaf insertion. Returning false from `visit` stops the
/// stream. Returns the number of trees visited.
std::uint64_t for_each_binary_tree(std::shared_ptr<const TaxonSet> taxa, const TaxonSubset& leaves,
                                   const std::function<bool(const Tree&)>& visit);

std::vector<Tree> enumerate_binary_trees(std::shared_ptr<const TaxonSet> taxa,
                                         const TaxonSubset& leaves);

/// Every tree (binary or not) on `leaves`, obtained by contracting internal
/// edges of binary trees, deduplicated by splits. Intended for <= 7 leaves.
std::vector<Tree> enumerate_all_trees(std::shared_ptr<const TaxonSet> taxa,
                                      const TaxonSubset& leaves);

/// Perfect phylogeny decision. A Compatible verdict always carries a witness
/// that has been re-checked with displays_all.
Verdict decide_pp(const CharacterMatrix& matrix, const SearchOptions& options = {});

/// Same decision over all trees including multifurcating ones; reference
/// oracle for small taxon sets.
Verdict decide_pp_all_trees(const CharacterMatrix& matrix);

/// Four-gamete test for two full characters with at most two states.
bool four_gamete_pair_test(const Character& lhs, const Character& rhs);

/// Pairwise four-gamete test over a full binary matrix.
bool binary_matrix_test(const CharacterMatrix& matrix);

/// True iff every subset of three characters (or the whole matrix, when it
/// has fewer) is compatible. Characters must be full with at most 3 states.
bool triple_test_3state(const CharacterMatrix& matrix, const SearchOptions& options = {});

struct Obstruction {
  std::vector<std::size_t> subset;
  bool minimal = false;
};

struct ObstructionList {
  std::vector<Obstruction> obstructions;
  /// False when the budget ran out before the lattice was exhausted.
  bool complete = true;
  std::uint64_t decisions = 0;
};

/// All inclusion-minimal incompatible character subsets of size <= max_size,
/// in lexicographic order of index lists.
ObstructionList minimal_obstructions(const CharacterMatrix& matrix, std::size_t max_size,
                                     const SearchOptions& options = {});

struct TreeList {
  std::vector<Tree> trees;
  /// False if the budget ran out or the limit cut the enumeration short.
  bool complete = true;
  bool budget_exceeded = false;
  SearchStats stats;
};

inline constexpr std::size_t kNoLimit = static_cast<std::size_t>(-1);

/// Binary trees displaying every character, in canonical split order.
TreeList enumerate_compatible_trees(const CharacterMatrix& matrix, std::size_t limit = kNoLimit,
                                    const SearchOptions& options = {});

/// Canonical ordering key: the tree's sorted splits.
bool canonical_less(const Tree& lhs, const Tree& rhs);

}  // namespace phylocompat
