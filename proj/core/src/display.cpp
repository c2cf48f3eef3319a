#include "phylocompat/display.hpp"

#include <array>
#include <queue>

namespace phylocompat {

namespace {

void require_same_taxa(const Tree& tree, std::size_t universe) {
  if (tree.taxa().size() != universe) {
    throw DomainError("character and tree are defined over different taxon sets");
  }
}

}  // namespace

bool displays_character(const Tree& tree, const Character& character) {
  require_same_taxa(tree, character.universe());
  constexpr std::size_t free = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(tree.vertex_count(), free);
  for (std::size_t s = 0; s < character.states().size(); ++s) {
    const auto& state = character.states()[s];
    if (!is_subset(state, tree.leaves())) {
      throw DomainError("character '" + character.name() +
                        "' covers taxa that are not leaves of the tree");
    }
    // A singleton state spans only its own leaf, which no other state reaches.
    if (state.size() < 2) continue;
    const auto span = spanning_vertices(tree, state);
    for (std::size_t v = 0; v < span.size(); ++v) {
      if (!span[v]) continue;
      if (owner[v] != free) return false;
      owner[v] = s;
    }
  }
  return true;
}

DisplayResult displays_all(const Tree& tree, const CharacterMatrix& matrix) {
  if (!(tree.taxa() == matrix.taxa())) {
    throw DomainError("tree and matrix are defined over different taxon sets");
  }
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (!displays_character(tree, matrix[i])) return DisplayResult{false, i};
  }
  return DisplayResult{};
}

MeetPoint meets(const Tree& tree, TaxonId x, const TaxonSubset& subset) {
  if (subset.empty()) throw DomainError("meets needs a non-empty subtree");
  if (contains(subset, x)) {
    throw DomainError("taxon '" + tree.taxa().label(x) + "' already lies in the subtree");
  }
  const VertexId start = tree.leaf_vertex(x);
  const auto span = spanning_vertices(tree, subset);
  std::vector<char> seen(tree.vertex_count(), 0);
  std::queue<VertexId> queue;
  queue.push(start);
  seen[start] = 1;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop();
    if (span[v]) return MeetPoint{v, std::nullopt};
    for (VertexId w : tree.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push(w);
      }
    }
  }
  throw DomainError("tree is disconnected");  // unreachable for valid trees
}

bool meets_between(const Tree& tree, TaxonId x, const TaxonSubset& subset, VertexId u,
                   VertexId v) {
  const auto span = spanning_vertices(tree, subset);
  if (u >= span.size() || v >= span.size() || !span[u] || !span[v]) {
    throw DomainError("path endpoints must be vertices of the restricted subtree");
  }
  const VertexId w = meets(tree, x, subset).vertex;
  for (VertexId p : tree.path(u, v)) {
    if (p == w) return true;
  }
  return false;
}

namespace {

/// Per-tree counts of the four quartet sets on each side of every edge.
class QuartetFrame {
 public:
  QuartetFrame(const Tree& tree, const Quartet& quartet) : tree_(tree) {
    const std::array<const TaxonSubset*, 4> parts{&quartet.s1, &quartet.s2, &quartet.s3,
                                                  &quartet.s4};
    for (std::size_t i = 0; i < 4; ++i) {
      if (parts[i]->empty()) throw DomainError("quartet sets must be non-empty");
      if (!is_subset(*parts[i], tree.leaves())) {
        throw DomainError("quartet set contains taxa that are not leaves of the tree");
      }
      for (std::size_t j = i + 1; j < 4; ++j) {
        if (!disjoint(*parts[i], *parts[j])) throw DomainError("quartet sets overlap");
      }
    }

    const std::size_t n = tree.vertex_count();
    below_.assign(n, Counts{});
    for (std::size_t k = 0; k < 4; ++k) {
      total_[k] = parts[k]->size();
      for (TaxonId t : *parts[k]) below_[tree.leaf_vertex(t)][k] = 1;
    }
    constexpr VertexId none = static_cast<VertexId>(-1);
    parent_.assign(n, none);
    std::vector<VertexId> order{0};
    parent_[0] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (VertexId y : tree.neighbors(order[i])) {
        if (parent_[y] == none) {
          parent_[y] = order[i];
          order.push_back(y);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (*it == 0) continue;
      for (std::size_t k = 0; k < 4; ++k) below_[parent_[*it]][k] += below_[*it][k];
    }
  }

  /// Deleting u leaves no component holding members of both sets.
  bool separates_at(VertexId u, std::size_t first, std::size_t second) const {
    for (VertexId w : tree_.neighbors(u)) {
      auto c = side(u, w);
      if (c[first] > 0 && c[second] > 0) return false;
    }
    return true;
  }

  /// Edge xy has S1 u S2 entirely on x's side and S3 u S4 entirely on y's side.
  bool oriented(VertexId x, VertexId y) const {
    auto c = side(x, y);
    return c[0] == 0 && c[1] == 0 && c[2] == total_[2] && c[3] == total_[3];
  }

  bool witnessed_by(VertexId u, VertexId v) const {
    if (u == v || !tree_.is_internal(u) || !tree_.is_internal(v)) return false;
    if (!separates_at(u, 0, 1) || !separates_at(v, 2, 3)) return false;
    const auto p = tree_.path(u, v);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      if (!oriented(p[i], p[i + 1])) return false;
    }
    return true;
  }

  std::optional<std::pair<VertexId, VertexId>> search() const {
    for (VertexId u = 0; u < tree_.vertex_count(); ++u) {
      if (!tree_.is_internal(u) || !separates_at(u, 0, 1)) continue;
      std::vector<std::pair<VertexId, VertexId>> stack;
      for (VertexId w : tree_.neighbors(u)) {
        if (oriented(u, w)) stack.emplace_back(u, w);
      }
      while (!stack.empty()) {
        auto [from, v] = stack.back();
        stack.pop_back();
        if (tree_.is_internal(v) && separates_at(v, 2, 3)) return std::make_pair(u, v);
        for (VertexId w : tree_.neighbors(v)) {
          if (w != from && oriented(v, w)) stack.emplace_back(v, w);
        }
      }
    }
    return std::nullopt;
  }

 private:
  using Counts = std::array<std::size_t, 4>;

  // Counts inside the component holding y once edge xy is deleted.
  Counts side(VertexId x, VertexId y) const {
    if (y != 0 && parent_[y] == x) return below_[y];
    Counts out{};
    for (std::size_t k = 0; k < 4; ++k) out[k] = total_[k] - below_[x][k];
    return out;
  }

  const Tree& tree_;
  std::vector<Counts> below_;
  std::vector<VertexId> parent_;
  Counts total_{};
};

}  // namespace

std::optional<std::pair<VertexId, VertexId>> find_quartet_display(const Tree& tree,
                                                                  const Quartet& quartet) {
  return QuartetFrame(tree, quartet).search();
}

bool displays_quartet_at(const Tree& tree, const Quartet& quartet, VertexId u, VertexId v) {
  if (u >= tree.vertex_count() || v >= tree.vertex_count()) {
    throw DomainError("vertex out of range");
  }
  return QuartetFrame(tree, quartet).witnessed_by(u, v);
}

bool displays_quartet(const Tree& tree, const Quartet& quartet) {
  return find_quartet_display(tree, quartet).has_value();
}

std::string format_quartet(const Quartet& quartet, const TaxonSet& taxa) {
  return taxa.format(quartet.s1) + "|" + taxa.format(quartet.s2) + " || " +
         taxa.format(quartet.s3) + "|" + taxa.format(quartet.s4);
}

}  // namespace phylocompat
