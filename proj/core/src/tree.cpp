#include "phylocompat/tree.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace phylocompat {

std::optional<TaxonId> Tree::taxon_at(VertexId v) const { return vertex_taxon_.at(v); }

std::optional<VertexId> Tree::vertex_of(TaxonId taxon) const {
  if (taxon >= taxon_vertex_.size()) return std::nullopt;
  return taxon_vertex_[taxon];
}

VertexId Tree::leaf_vertex(TaxonId taxon) const {
  if (auto v = vertex_of(taxon)) return *v;
  throw DomainError("taxon '" + (taxa_ && taxon < taxa_->size() ? taxa_->label(taxon)
                                                                 : std::to_string(taxon)) +
                    "' is not a leaf of the tree");
}

std::optional<VertexId> Tree::find_vertex(std::string_view name) const {
  for (std::size_t v = 0; v < names_.size(); ++v) {
    if (names_[v] == name) return static_cast<VertexId>(v);
  }
  return std::nullopt;
}

std::vector<std::pair<VertexId, VertexId>> Tree::edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (std::size_t u = 0; u < adjacency_.size(); ++u) {
    for (VertexId w : adjacency_[u]) {
      if (u < w) out.emplace_back(static_cast<VertexId>(u), w);
    }
  }
  return out;
}

std::vector<VertexId> Tree::path(VertexId u, VertexId v) const {
  if (u >= vertex_count() || v >= vertex_count()) throw DomainError("vertex out of range");
  constexpr VertexId none = static_cast<VertexId>(-1);
  std::vector<VertexId> parent(vertex_count(), none);
  std::queue<VertexId> queue;
  parent[u] = u;
  queue.push(u);
  while (!queue.empty()) {
    VertexId x = queue.front();
    queue.pop();
    if (x == v) break;
    for (VertexId y : adjacency_[x]) {
      if (parent[y] == none) {
        parent[y] = x;
        queue.push(y);
      }
    }
  }
  std::vector<VertexId> out{v};
  while (out.back() != u) out.push_back(parent[out.back()]);
  std::reverse(out.begin(), out.end());
  return out;
}

bool Tree::is_binary() const {
  for (std::size_t v = 0; v < adjacency_.size(); ++v) {
    if (!vertex_taxon_[v] && adjacency_[v].size() != 3) return false;
  }
  return true;
}

TreeBuilder::TreeBuilder(std::shared_ptr<const TaxonSet> taxa) {
  if (!taxa) throw DomainError("tree needs a taxon set");
  tree_.taxon_vertex_.assign(taxa->size(), std::nullopt);
  tree_.taxa_ = std::move(taxa);
}

VertexId TreeBuilder::add_vertex(std::string name) {
  auto id = static_cast<VertexId>(tree_.adjacency_.size());
  tree_.adjacency_.emplace_back();
  tree_.names_.push_back(name.empty() ? "n" + std::to_string(id) : std::move(name));
  tree_.vertex_taxon_.push_back(std::nullopt);
  return id;
}

VertexId TreeBuilder::add_leaf(TaxonId taxon) {
  if (taxon >= tree_.taxon_vertex_.size()) throw DomainError("taxon id out of range");
  if (tree_.taxon_vertex_[taxon]) {
    throw DomainError("taxon '" + tree_.taxa_->label(taxon) + "' labels two vertices");
  }
  VertexId v = add_vertex(tree_.taxa_->label(taxon));
  tree_.vertex_taxon_[v] = taxon;
  tree_.taxon_vertex_[taxon] = v;
  return v;
}

VertexId TreeBuilder::add_leaf(std::string_view label) { return add_leaf(tree_.taxa_->id(label)); }

void TreeBuilder::add_edge(VertexId u, VertexId v) {
  if (u >= vertex_count() || v >= vertex_count()) throw DomainError("edge endpoint out of range");
  if (u == v) throw DomainError("self-loop at vertex " + tree_.names_[u]);
  auto& nu = tree_.adjacency_[u];
  if (std::find(nu.begin(), nu.end(), v) != nu.end()) {
    throw DomainError("duplicate edge " + tree_.names_[u] + "-" + tree_.names_[v]);
  }
  nu.push_back(v);
  tree_.adjacency_[v].push_back(u);
}

Tree TreeBuilder::build() && {
  Tree& t = tree_;
  const std::size_t n = t.adjacency_.size();
  std::size_t degree_sum = 0;
  for (const auto& a : t.adjacency_) degree_sum += a.size();
  if (n > 0 && degree_sum != 2 * (n - 1)) throw DomainError("graph is not a tree (edge count)");
  if (n > 0) {
    std::vector<char> seen(n, 0);
    std::vector<VertexId> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      for (VertexId y : t.adjacency_[x]) {
        if (!seen[y]) {
          seen[y] = 1;
          ++reached;
          stack.push_back(y);
        }
      }
    }
    if (reached != n) throw DomainError("graph is not a tree (disconnected)");
  }
  for (std::size_t v = 0; v < n && n > 2; ++v) {
    if (t.vertex_taxon_[v] && t.adjacency_[v].size() != 1) {
      throw DomainError("labelled vertex " + t.names_[v] + " is not a leaf");
    }
  }
  for (std::size_t v = 0; v < n && n > 1; ++v) {
    if (!t.vertex_taxon_[v] && t.adjacency_[v].size() < 2) {
      throw DomainError("unlabelled vertex " + t.names_[v] + " is a leaf");
    }
  }
  if (n == 1 && !t.vertex_taxon_[0]) throw DomainError("single-vertex tree must be labelled");
  t.leaves_.clear();
  for (std::size_t x = 0; x < t.taxon_vertex_.size(); ++x) {
    if (t.taxon_vertex_[x]) t.leaves_.push_back(static_cast<TaxonId>(x));
  }
  return std::move(t);
}

std::vector<char> spanning_vertices(const Tree& tree, const TaxonSubset& taxa) {
  std::vector<char> mark(tree.vertex_count(), 0);
  if (taxa.empty()) return mark;
  const std::size_t n = tree.vertex_count();
  std::vector<char> target(n, 0);
  for (TaxonId t : taxa) target[tree.leaf_vertex(t)] = 1;
  const VertexId root = tree.leaf_vertex(taxa.front());

  // Rooted at a member of the set, a vertex lies in the spanning subtree
  // exactly when its rooted subtree contains a member.
  constexpr VertexId none = static_cast<VertexId>(-1);
  std::vector<VertexId> parent(n, none);
  std::vector<VertexId> order;
  order.reserve(n);
  parent[root] = root;
  order.push_back(root);
  for (std::size_t i = 0; i < order.size(); ++i) {
    VertexId x = order[i];
    for (VertexId y : tree.neighbors(x)) {
      if (parent[y] == none) {
        parent[y] = x;
        order.push_back(y);
      }
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    VertexId x = *it;
    if (target[x]) mark[x] = 1;
    if (mark[x] && x != root) mark[parent[x]] = 1;
  }
  return mark;
}

namespace {

Tree rebuild(const Tree& tree, const std::vector<char>& keep) {
  TreeBuilder builder(tree.taxa_ptr());
  std::vector<VertexId> remap(tree.vertex_count(), static_cast<VertexId>(-1));
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (!keep[v]) continue;
    if (auto t = tree.taxon_at(v)) {
      remap[v] = builder.add_leaf(*t);
    } else {
      remap[v] = builder.add_vertex(tree.vertex_name(v));
    }
  }
  for (auto [u, v] : tree.edges()) {
    if (keep[u] && keep[v]) builder.add_edge(remap[u], remap[v]);
  }
  return std::move(builder).build();
}

}  // namespace

Tree restrict_tree(const Tree& tree, const TaxonSubset& taxa, bool suppress) {
  if (taxa.empty()) throw DomainError("cannot restrict a tree to the empty set");
  if (!is_subset(taxa, tree.leaves())) {
    throw DomainError("restriction set " + tree.taxa().format(subset_difference(taxa, tree.leaves())) +
                      " is not contained in the tree's leaves");
  }
  Tree out = rebuild(tree, spanning_vertices(tree, taxa));
  return suppress ? suppress_degree_two(out) : out;
}

Tree suppress_degree_two(const Tree& tree) {
  const std::size_t n = tree.vertex_count();
  std::vector<std::set<VertexId>> adj(n);
  for (VertexId v = 0; v < n; ++v) adj[v].insert(tree.neighbors(v).begin(), tree.neighbors(v).end());
  std::vector<char> alive(n, 1);
  for (VertexId v = 0; v < n; ++v) {
    if (tree.taxon_at(v) || adj[v].size() != 2) continue;
    VertexId x = *adj[v].begin();
    VertexId y = *std::next(adj[v].begin());
    adj[x].erase(v);
    adj[y].erase(v);
    adj[x].insert(y);
    adj[y].insert(x);
    adj[v].clear();
    alive[v] = 0;
  }
  TreeBuilder builder(tree.taxa_ptr());
  std::vector<VertexId> remap(n, static_cast<VertexId>(-1));
  for (VertexId v = 0; v < n; ++v) {
    if (!alive[v]) continue;
    remap[v] = tree.taxon_at(v) ? builder.add_leaf(*tree.taxon_at(v))
                                : builder.add_vertex(tree.vertex_name(v));
  }
  for (VertexId v = 0; v < n; ++v) {
    for (VertexId w : adj[v]) {
      if (v < w) builder.add_edge(remap[v], remap[w]);
    }
  }
  return std::move(builder).build();
}

std::vector<Split> splits(const Tree& tree) {
  const auto& all = tree.leaves();
  if (all.size() < 4) return {};
  const std::size_t n = tree.vertex_count();
  const VertexId root = tree.leaf_vertex(all.front());
  constexpr VertexId none = static_cast<VertexId>(-1);
  std::vector<VertexId> parent(n, none);
  std::vector<VertexId> order{root};
  parent[root] = root;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (VertexId y : tree.neighbors(order[i])) {
      if (parent[y] == none) {
        parent[y] = order[i];
        order.push_back(y);
      }
    }
  }
  std::vector<TaxonSubset> below(n);
  std::vector<Split> out;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    VertexId x = *it;
    if (auto t = tree.taxon_at(x)) below[x].push_back(*t);
    std::sort(below[x].begin(), below[x].end());
    if (x == root) continue;
    if (below[x].size() >= 2 && all.size() - below[x].size() >= 2) {
      out.push_back(Split{subset_difference(all, below[x])});
    }
    auto& up = below[parent[x]];
    up.insert(up.end(), below[x].begin(), below[x].end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool same_topology(const Tree& lhs, const Tree& rhs) {
  return lhs.leaves() == rhs.leaves() && splits(lhs) == splits(rhs);
}

Tree tree_from_splits(std::shared_ptr<const TaxonSet> taxa, const TaxonSubset& leaves,
                      const std::vector<Split>& split_list) {
  TreeBuilder builder(taxa);
  if (leaves.empty()) throw DomainError("tree needs at least one leaf");
  if (leaves.size() <= 3) {
    if (!split_list.empty()) throw DomainError("trees on <= 3 leaves have no non-trivial splits");
    if (leaves.size() == 1) {
      builder.add_leaf(leaves[0]);
    } else if (leaves.size() == 2) {
      builder.add_edge(builder.add_leaf(leaves[0]), builder.add_leaf(leaves[1]));
    } else {
      VertexId c = builder.add_vertex();
      for (TaxonId t : leaves) builder.add_edge(c, builder.add_leaf(t));
    }
    return std::move(builder).build();
  }

  const TaxonId root_taxon = leaves.front();
  std::vector<TaxonSubset> clusters;
  for (const auto& s : split_list) {
    if (!is_subset(s.side, leaves) || !contains(s.side, root_taxon) || s.side.size() < 2 ||
        s.side.size() + 2 > leaves.size()) {
      throw DomainError("split is not a non-trivial canonical split of the leaf set");
    }
    clusters.push_back(subset_difference(leaves, s.side));
  }
  clusters.push_back(subset_difference(leaves, {root_taxon}));
  std::sort(clusters.begin(), clusters.end(),
            [](const auto& l, const auto& r) { return l.size() != r.size() ? l.size() > r.size() : l < r; });
  clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());

  std::vector<VertexId> vertex(clusters.size());
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    vertex[i] = builder.add_vertex();
    if (i == 0) continue;
    std::optional<std::size_t> parent;
    for (std::size_t j = i; j-- > 0;) {
      if (is_subset(clusters[i], clusters[j])) {
        parent = j;
        break;
      }
      if (!disjoint(clusters[i], clusters[j]) && clusters[i].size() <= clusters[j].size()) {
        throw DomainError("splits are not pairwise compatible");
      }
    }
    builder.add_edge(vertex[*parent], vertex[i]);
  }
  builder.add_edge(vertex[0], builder.add_leaf(root_taxon));
  for (TaxonId t : leaves) {
    if (t == root_taxon) continue;
    std::size_t owner = 0;
    for (std::size_t j = clusters.size(); j-- > 0;) {
      if (contains(clusters[j], t)) {
        owner = j;
        break;
      }
    }
    builder.add_edge(vertex[owner], builder.add_leaf(t));
  }
  return std::move(builder).build();
}

Tree tree_from_edges(std::shared_ptr<const TaxonSet> taxa,
                     const std::vector<std::pair<std::string, std::string>>& edges) {
  TreeBuilder builder(taxa);
  std::map<std::string, VertexId> ids;
  auto vertex = [&](const std::string& name) {
    auto it = ids.find(name);
    if (it != ids.end()) return it->second;
    VertexId v = taxa->find(name) ? builder.add_leaf(name) : builder.add_vertex(name);
    ids.emplace(name, v);
    return v;
  };
  for (const auto& [u, v] : edges) {
    VertexId x = vertex(u);
    VertexId y = vertex(v);
    builder.add_edge(x, y);
  }
  return std::move(builder).build();
}

}  // namespace phylocompat
