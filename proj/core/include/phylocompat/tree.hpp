#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phylocompat/taxa.hpp"

namespace phylocompat {

using VertexId = std::uint32_t;

/// One side of a leaf bipartition, oriented to contain the smallest leaf id.
struct Split {
  TaxonSubset side;
  auto operator<=>(const Split&) const = default;
};

/// Unrooted tree whose labelled vertices carry taxa of a shared TaxonSet.
///
/// The leaf set may be any subset of the taxon set (restricted subtrees and
/// partial search trees are trees on fewer taxa). Internal vertices are
/// unlabelled and may have degree 2. Vertex names are diagnostic only.
class Tree {
 public:
  Tree() = default;

  const TaxonSet& taxa() const { return *taxa_; }
  const std::shared_ptr<const TaxonSet>& taxa_ptr() const { return taxa_; }

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return adjacency_.empty() ? 0 : adjacency_.size() - 1; }
  std::span<const VertexId> neighbors(VertexId v) const { return adjacency_.at(v); }
  std::size_t degree(VertexId v) const { return adjacency_.at(v).size(); }
  std::optional<TaxonId> taxon_at(VertexId v) const;
  std::optional<VertexId> vertex_of(TaxonId taxon) const;
  VertexId leaf_vertex(TaxonId taxon) const;
  const std::string& vertex_name(VertexId v) const { return names_.at(v); }
  std::optional<VertexId> find_vertex(std::string_view name) const;
  bool is_internal(VertexId v) const { return !taxon_at(v).has_value(); }

  /// Taxa labelling this tree's leaves.
  const TaxonSubset& leaves() const { return leaves_; }
  std::vector<std::pair<VertexId, VertexId>> edges() const;
  /// Vertices on the u-v path, both endpoints included.
  std::vector<VertexId> path(VertexId u, VertexId v) const;
  /// Every internal vertex has degree exactly 3.
  bool is_binary() const;

 private:
  friend class TreeBuilder;

  std::shared_ptr<const TaxonSet> taxa_;
  std::vector<std::vector<VertexId>> adjacency_;
  std::vector<std::string> names_;
  std::vector<std::optional<TaxonId>> vertex_taxon_;
  std::vector<std::optional<VertexId>> taxon_vertex_;
  TaxonSubset leaves_;
};

class TreeBuilder {
 public:
  explicit TreeBuilder(std::shared_ptr<const TaxonSet> taxa);

  VertexId add_vertex(std::string name = {});
  VertexId add_leaf(TaxonId taxon);
  VertexId add_leaf(std::string_view label);
  void add_edge(VertexId u, VertexId v);
  std::size_t vertex_count() const { return tree_.adjacency_.size(); }

  /// Validates connectivity, acyclicity and leaf placement.
  Tree build() &&;

 private:
  Tree tree_;
};

/// Membership mask (indexed by vertex) of the minimal subtree spanning the
/// leaves of `taxa`. Every taxon must label a vertex of `tree`.
std::vector<char> spanning_vertices(const Tree& tree, const TaxonSubset& taxa);

/// T[X'], the minimal subtree spanning `taxa`. Degree-2 vertices are kept
/// unless `suppress` is set.
Tree restrict_tree(const Tree& tree, const TaxonSubset& taxa, bool suppress = false);

/// Smooths away unlabelled degree-2 vertices.
Tree suppress_degree_two(const Tree& tree);

/// Non-trivial splits (both sides with at least two leaves), sorted.
std::vector<Split> splits(const Tree& tree);

/// Leaf-labelled isomorphism after degree-2 suppression.
bool same_topology(const Tree& lhs, const Tree& rhs);

/// Builds the tree on `leaves` whose non-trivial splits are exactly `splits`.
/// Throws DomainError if the splits are not pairwise compatible.
Tree tree_from_splits(std::shared_ptr<const TaxonSet> taxa, const TaxonSubset& leaves,
                      const std::vector<Split>& splits);

/// Builds a tree with vertex ids and names copied from an edge list of names.
/// Names that match a taxon label become leaves.
Tree tree_from_edges(std::shared_ptr<const TaxonSet> taxa,
                     const std::vector<std::pair<std::string, std::string>>& edges);

}  // namespace phylocompat
