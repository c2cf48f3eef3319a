#pragma once

#include <optional>
#include <utility>

#include "phylocompat/character.hpp"
#include "phylocompat/tree.hpp"

namespace phylocompat {

/// True iff the spanning subtrees of the character's states are pairwise
/// vertex-disjoint. Gapped taxa are ignored; every covered taxon must be a
/// leaf of the tree.
bool displays_character(const Tree& tree, const Character& character);

struct DisplayResult {
  bool displayed = true;
  std::optional<std::size_t> first_failing;

  explicit operator bool() const { return displayed; }
};

/// Checks every character of the matrix; reports the first one not displayed.
DisplayResult displays_all(const Tree& tree, const CharacterMatrix& matrix);

/// Vertex at which a leaf x meets T[X'].
struct MeetPoint {
  VertexId vertex = 0;
  /// Endpoints of the path the caller asked about, when one was given.
  std::optional<std::pair<VertexId, VertexId>> on_path_between;
};

/// The unique vertex v of T[X'] such that the path from x to v shares no
/// edge with T[X'].
MeetPoint meets(const Tree& tree, TaxonId x, const TaxonSubset& subset);

/// Whether meets(tree, x, subset) lies on the u-v path of T[X'], endpoints
/// included.
bool meets_between(const Tree& tree, TaxonId x, const TaxonSubset& subset, VertexId u,
                   VertexId v);

/// S1 | S2 || S3 | S4 over pairwise-disjoint non-empty taxon sets.
struct Quartet {
  TaxonSubset s1, s2, s3, s4;
};

/// Internal vertices u != v witnessing that the tree displays the quartet:
/// every edge on the u-v path has S1 u S2 on u's side and S3 u S4 on v's side,
/// deleting u separates S1 from S2 and deleting v separates S3 from S4.
/// Separation is evaluated on the whole tree.
std::optional<std::pair<VertexId, VertexId>> find_quartet_display(const Tree& tree,
                                                                  const Quartet& quartet);

bool displays_quartet(const Tree& tree, const Quartet& quartet);

/// Whether the specific pair (u, v) witnesses the quartet.
bool displays_quartet_at(const Tree& tree, const Quartet& quartet, VertexId u, VertexId v);

std::string format_quartet(const Quartet& quartet, const TaxonSet& taxa);

}  // namespace phylocompat
