#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "phylocompat/construction.hpp"
#include "phylocompat/display.hpp"
#include "phylocompat/solver.hpp"

using namespace phylocompat;
using testing_support::parse_partition;

namespace {

// Text form of a family character, written straight from the definitions.
std::string x_le(int k, int n) {
  std::string s;
  for (int h = 1; h <= std::min(k, n); ++h) s += "a" + std::to_string(h) + "b" + std::to_string(h);
  return s;
}

std::string x_ge(int k, int n) {
  std::string s;
  for (int h = std::max(k, 1); h <= n; ++h) s += "a" + std::to_string(h) + "b" + std::to_string(h);
  return s;
}

std::string leaf(char side, int h, int n) {
  return h >= 1 && h <= n ? std::string(1, side) + std::to_string(h) : std::string();
}

std::string chi_text(int j, int n) {
  return x_le(j - 2, n) + "|" + leaf('a', j - 1, n) + "|" + leaf('b', j - 1, n) + "|" +
         leaf('a', j, n) + leaf('a', j + 1, n) + "|" + leaf('b', j, n) + leaf('b', j + 1, n) + "|" +
         leaf('a', j + 2, n) + "|" + leaf('b', j + 2, n) + "|" + x_ge(j + 3, n);
}

std::string phi_text(int j, int n) {
  const char p = j % 2 == 0 ? 'b' : 'a';
  const char q = j % 2 == 0 ? 'a' : 'b';
  return x_le(j - 3, n) + leaf(p, j - 2, n) + leaf(p, j - 1, n) + "|" + leaf(q, j - 2, n) + "|" +
         leaf(q, j - 1, n) + "|" + leaf(p, j, n) + "|" + leaf(p, j + 1, n) + "|" + leaf(q, j, n) +
         leaf(q, j + 1, n) + x_ge(j + 2, n);
}

std::string omega_a_text(int n) { return "a1b1b2|a2" + x_ge(3, n); }

std::string omega_b_text(int n) {
  return x_le(n - 2, n) + leaf('b', n - 1, n) + "|" + leaf('a', n - 1, n) + leaf('a', n, n) +
         leaf('b', n, n);
}

// Lobster A (or B with the roles of a and b exchanged), built from the
// verbal definition with TreeBuilder.
Tree reference_lobster(int n, bool b_spine) {
  auto taxa = std::make_shared<const TaxonSet>(TaxonSet::structured(n));
  const char spine = b_spine ? 'b' : 'a';
  const char other = b_spine ? 'a' : 'b';
  TreeBuilder tb(taxa);
  std::vector<VertexId> u(static_cast<std::size_t>(n));
  for (int i = 1; i <= n - 1; ++i) u[static_cast<std::size_t>(i)] = tb.add_vertex();
  tb.add_edge(tb.add_leaf(leaf(spine, 1, n)), u[1]);
  tb.add_edge(tb.add_leaf(leaf(spine, n, n)), u[static_cast<std::size_t>(n - 1)]);
  for (int i = 1; i <= n - 1; ++i) {
    if (i > 1) tb.add_edge(u[static_cast<std::size_t>(i - 1)], u[static_cast<std::size_t>(i)]);
    const VertexId v = tb.add_vertex();
    tb.add_edge(u[static_cast<std::size_t>(i)], v);
    const char side = i % 2 == 1 ? other : spine;
    tb.add_edge(v, tb.add_leaf(leaf(side, i, n)));
    tb.add_edge(v, tb.add_leaf(leaf(side, i + 1, n)));
  }
  return std::move(tb).build();
}

// Leaves on x's side of the edge x-y.
TaxonSubset side_of(const Tree& t, VertexId x, VertexId y) {
  TaxonSubset out;
  std::vector<std::pair<VertexId, VertexId>> stack{{x, y}};
  while (!stack.empty()) {
    auto [v, from] = stack.back();
    stack.pop_back();
    if (auto taxon = t.taxon_at(v)) out.push_back(*taxon);
    for (auto w : t.neighbors(v)) {
      if (w != from) stack.push_back({w, v});
    }
  }
  return make_subset(std::move(out));
}

Tree swap_leaves(const Tree& t, TaxonId x, TaxonId y) {
  TreeBuilder tb(t.taxa_ptr());
  for (VertexId v = 0; v < t.vertex_count(); ++v) {
    if (auto taxon = t.taxon_at(v)) {
      const TaxonId mapped = *taxon == x ? y : *taxon == y ? x : *taxon;
      tb.add_leaf(mapped);
    } else {
      tb.add_vertex();
    }
  }
  for (auto [a, b] : t.edges()) tb.add_edge(a, b);
  return std::move(tb).build();
}

struct Witness {
  std::string name;
  Tree tree;
  std::size_t excluded;
};

std::vector<Witness> witnesses(const FamilyInstance& f) {
  const int n = f.n;
  std::vector<Witness> out{{"A", lobster_a(n), f.omega_b()}, {"B", lobster_b(n), f.omega_a()}};
  for (int i = 2; i <= n - 2; ++i) out.push_back({"A_iB", lobster_a_cross_b(n, i), f.chi(i)});
  for (int i = 3; i <= n - 1; ++i) out.push_back({"A^iB", lobster_a_jagged_b(n, i), f.phi(i)});
  return out;
}

}  // namespace

TEST_CASE("C(4) is the eight-taxon example", "[construction]") {
  const auto f = counterexample(4);
  const auto& x = f.taxa();
  REQUIRE(x.size() == 8);
  REQUIRE(f.matrix.size() == 4);
  REQUIRE(f.matrix[0] == parse_partition(x, "a1b1b2|a2a3b3a4b4"));
  REQUIRE(f.matrix[1] == parse_partition(x, "a1|b1|a2a3|b2b3|a4|b4"));
  REQUIRE(f.matrix[2] == parse_partition(x, "a1a2|b1|b2|a3|a4|b3b4"));
  REQUIRE(f.matrix[3] == parse_partition(x, "a1b1a2b2b3|a3a4b4"));
  REQUIRE(f.matrix[0].name() == "Omega_A");
  REQUIRE(f.matrix[1].name() == "chi_2");
  REQUIRE(f.matrix[2].name() == "phi_3");
  REQUIRE(f.matrix[3].name() == "Omega_B");
}

TEST_CASE("C(n) matches the character definitions", "[construction]") {
  for (int n : {4, 6, 8, 10, 12}) {
    CAPTURE(n);
    const auto f = counterexample(n);
    const auto& x = f.taxa();
    REQUIRE(x.size() == static_cast<std::size_t>(2 * n));
    REQUIRE(f.matrix.size() == static_cast<std::size_t>(2 * n - 4));
    REQUIRE(f.matrix[f.omega_a()] == parse_partition(x, omega_a_text(n)));
    REQUIRE(f.matrix[f.omega_b()] == parse_partition(x, omega_b_text(n)));
    for (int j = 2; j <= n - 2; ++j) {
      CAPTURE(j);
      REQUIRE(f.matrix[f.chi(j)] == parse_partition(x, chi_text(j, n)));
      REQUIRE(f.matrix[f.chi(j)].name() == "chi_" + std::to_string(j));
    }
    for (int j = 3; j <= n - 1; ++j) {
      CAPTURE(j);
      REQUIRE(f.matrix[f.phi(j)] == parse_partition(x, phi_text(j, n)));
      REQUIRE(f.matrix[f.phi(j)].name() == "phi_" + std::to_string(j));
      REQUIRE(f.matrix[f.phi(j)].state_count() <= 6);
    }
    for (const auto& c : f.matrix.characters()) {
      REQUIRE(c.is_full());
      REQUIRE(c.state_count() <= 8);
    }
    REQUIRE(f.matrix[f.omega_a()].state_count() == 2);
    REQUIRE(f.matrix[f.omega_b()].state_count() == 2);
    // X_le(n-4) is empty at n = 4, leaving six states.
    REQUIRE(f.matrix[f.chi(n - 2)].state_count() == (n == 4 ? 6u : 7u));
    REQUIRE_THROWS_AS(f.chi(1), DomainError);
    REQUIRE_THROWS_AS(f.phi(n), DomainError);
  }
  REQUIRE_THROWS_AS(counterexample(5), DomainError);
  REQUIRE_THROWS_AS(counterexample(7), DomainError);
  REQUIRE_THROWS_AS(counterexample(2), DomainError);
  REQUIRE_THROWS_AS(counterexample(0), DomainError);
}

TEST_CASE("lobsters A and B follow the definition", "[construction][lobster]") {
  for (int n : {4, 6, 8, 10}) {
    CAPTURE(n);
    const Tree a = lobster_a(n);
    const Tree b = lobster_b(n);
    for (const Tree* t : {&a, &b}) {
      REQUIRE(t->is_binary());
      REQUIRE(t->leaves().size() == static_cast<std::size_t>(2 * n));
      REQUIRE(t->vertex_count() - t->leaves().size() == static_cast<std::size_t>(2 * n - 2));
    }
    REQUIRE(splits(a) == splits(reference_lobster(n, false)));
    REQUIRE(splits(b) == splits(reference_lobster(n, true)));
    REQUIRE(oracle::isomorphic(a, reference_lobster(n, false)));
    REQUIRE(a.find_vertex("u1"));
    REQUIRE(a.find_vertex("v" + std::to_string(n - 1)));
  }
  REQUIRE_THROWS_AS(lobster_a(5), DomainError);
  REQUIRE_THROWS_AS(lobster_b(3), DomainError);
}

TEST_CASE("A_iB and A^iB structure", "[construction][lobster]") {
  for (int n : {4, 6, 8}) {
    const auto fam = counterexample(n);
    const auto& x = fam.taxa();
    const Tree a = lobster_a(n);
    const Tree b = lobster_b(n);
    for (int i = 2; i <= n - 2; ++i) {
      CAPTURE(n, i);
      const Tree t = lobster_a_cross_b(n, i);
      REQUIRE(t.is_binary());
      REQUIRE(t.leaves() == x.all());
      REQUIRE(t.vertex_count() - t.leaves().size() == static_cast<std::size_t>(2 * n - 2));
      REQUIRE_FALSE(t.find_vertex("u" + std::to_string(i)));
      REQUIRE_FALSE(t.find_vertex("v" + std::to_string(i)));
      REQUIRE(splits(restrict_tree(t, x.x_le(i), true)) == splits(restrict_tree(a, x.x_le(i), true)));
      REQUIRE(splits(restrict_tree(t, x.x_ge(i + 1), true)) ==
              splits(restrict_tree(b, x.x_ge(i + 1), true)));
    }
    for (int i = 3; i <= n - 1; ++i) {
      CAPTURE(n, i);
      const Tree t = lobster_a_jagged_b(n, i);
      REQUIRE(t.is_binary());
      REQUIRE(t.leaves() == x.all());
      const Tree base = lobster_a_cross_b(n, i - 1);
      const Tree swapped = i % 2 == 0 ? swap_leaves(base, x.a(i), x.b(i - 1))
                                      : swap_leaves(base, x.a(i - 1), x.b(i));
      REQUIRE(splits(t) == splits(swapped));
    }
  }
  REQUIRE_THROWS_AS(lobster_a_cross_b(6, 1), DomainError);
  REQUIRE_THROWS_AS(lobster_a_cross_b(6, 5), DomainError);
  REQUIRE_THROWS_AS(lobster_a_jagged_b(6, 2), DomainError);
  REQUIRE_THROWS_AS(lobster_a_jagged_b(6, 6), DomainError);
}

TEST_CASE("Omega_A is cut by the u1-uA edge", "[construction][lobster]") {
  const auto f = counterexample(6);
  const auto& x = f.taxa();
  const TaxonSubset expected = make_subset({x.a(1), x.b(1), x.b(2)});
  for (const Tree& t : {lobster_a_cross_b(6, 2), lobster_a_jagged_b(6, 3)}) {
    const auto u1 = t.find_vertex("u1");
    const auto ua = t.find_vertex("uA");
    REQUIRE(u1);
    REQUIRE(ua);
    REQUIRE(std::find(t.neighbors(*u1).begin(), t.neighbors(*u1).end(), *ua) != t.neighbors(*u1).end());
    REQUIRE(side_of(t, *u1, *ua) == expected);
    REQUIRE(displays_character(t, f.matrix[f.omega_a()]));
  }
  // In A the cut is u1-u2.
  const Tree a = lobster_a(6);
  REQUIRE(side_of(a, *a.find_vertex("u1"), *a.find_vertex("u2")) == expected);
}

TEST_CASE("each witness displays everything but its character", "[construction][lobster]") {
  for (int n : {4, 6, 8, 10}) {
    const auto f = counterexample(n);
    const auto cols = [&] {
      std::vector<oracle::Column> out;
      for (const auto& c : f.matrix.characters()) out.push_back(oracle::column_of(c));
      return out;
    }();
    for (const auto& w : witnesses(f)) {
      CAPTURE(n, w.name, w.excluded);
      for (std::size_t c = 0; c < f.matrix.size(); ++c) {
        const bool shown = displays_character(w.tree, f.matrix[c]);
        REQUIRE(shown == (c != w.excluded));
        REQUIRE(oracle::convex(w.tree, cols[c]) == shown);
      }
    }
  }
  const auto f6 = counterexample(6);
  REQUIRE(displays_all(lobster_a_cross_b(6, 3), f6.matrix.without(f6.chi(3))).displayed);
  REQUIRE_FALSE(displays_character(lobster_a_cross_b(6, 3), f6.matrix[f6.chi(3)]));
  REQUIRE(displays_all(lobster_a_jagged_b(6, 4), f6.matrix.without(f6.phi(4))).displayed);
  REQUIRE_FALSE(displays_character(lobster_a_jagged_b(6, 4), f6.matrix[f6.phi(4)]));
}

TEST_CASE("Fitch example", "[construction][fitch]") {
  const auto m = fitch_example();
  const auto& x = m.taxa();
  REQUIRE(x.labels() == std::vector<std::string>{"x1", "x2", "x3", "x4", "x5"});
  REQUIRE(m.size() == 3);
  REQUIRE(m[0] == parse_partition(x, "x1x2|x3x4|x5"));
  REQUIRE(m[1] == parse_partition(x, "x1x5|x2x4|x3"));
  REQUIRE(m[2] == parse_partition(x, "x1|x2x3|x4x5"));
  REQUIRE(m.characters() ==
          matrix_from_sequences({"x1", "x2", "x3", "x4", "x5"}, {"AAA", "ACC", "CGC", "CCG", "GAG"})
              .characters());

  std::vector<oracle::Column> cols;
  for (const auto& c : m.characters()) cols.push_back(oracle::column_of(c));
  const auto trees = oracle::all_binary_trees(5);
  REQUIRE(trees.size() == 15);
  std::size_t all_three = 0;
  for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}}) {
    std::size_t count = 0;
    for (const auto& t : trees) count += oracle::convex(t, cols[i]) && oracle::convex(t, cols[j]) ? 1 : 0;
    REQUIRE(count == 1);
    const auto listed = enumerate_compatible_trees(m.subset({static_cast<std::size_t>(i), static_cast<std::size_t>(j)}));
    REQUIRE(listed.trees.size() == 1);
  }
  for (const auto& t : trees) {
    all_three += oracle::convex(t, cols[0]) && oracle::convex(t, cols[1]) && oracle::convex(t, cols[2]) ? 1 : 0;
  }
  REQUIRE(all_three == 0);
  REQUIRE_THROWS_AS(matrix_from_sequences({"x1", "x2"}, {"AA", "A"}), DomainError);
}

TEST_CASE("duplicate_taxon", "[construction][transform]") {
  SECTION("C(4) with a copy of a1") {
    const auto m = duplicate_taxon(counterexample(4).matrix, "a1", 1);
    REQUIRE(m.taxa().size() == 9);
    REQUIRE(m.taxa().find("a1_dup1"));
    REQUIRE(decide_pp(m).incompatible());
    for (std::size_t drop = 0; drop < m.size(); ++drop) REQUIRE(decide_pp(m.without(drop)).compatible());
    const auto a1 = m.taxa().id("a1");
    const auto copy = m.taxa().id("a1_dup1");
    for (const auto& c : m.characters()) REQUIRE(c.state_of(a1) == c.state_of(copy));
  }
  SECTION("several copies and gapped source") {
    auto taxa = oracle::numbered_taxa(4);
    const auto m = oracle::matrix_of(taxa, {{0, 0, 1, 1}, {-1, 0, 0, 1}});
    const auto d = duplicate_taxon(m, "t0", 3);
    REQUIRE(d.taxa().size() == 7);
    for (int k = 1; k <= 3; ++k) {
      const auto id = d.taxa().id("t0_dup" + std::to_string(k));
      REQUIRE(d[0].state_of(id) == d[0].state_of(d.taxa().id("t0")));
      REQUIRE(d[1].state_of(id) == Character::npos);
    }
  }
  SECTION("rejects bad arguments") {
    const auto m = counterexample(4).matrix;
    REQUIRE_THROWS_AS(duplicate_taxon(m, "a1", 0), DomainError);
    REQUIRE_THROWS_AS(duplicate_taxon(m, "z9", 1), DomainError);
  }
  SECTION("status is preserved") {
    std::mt19937 rng(71);
    for (int trial = 0; trial < 60; ++trial) {
      const int k = 4 + trial % 3;
      auto taxa = oracle::numbered_taxa(k);
      std::vector<oracle::Column> cols;
      for (int c = 0; c < 3; ++c) cols.push_back(oracle::random_column(k, 2 + trial % 3, 0.15, rng));
      const auto m = oracle::matrix_of(taxa, cols);
      const auto d = duplicate_taxon(m, taxa->label(static_cast<TaxonId>(trial % k)), 1 + trial % 2);
      REQUIRE(decide_pp(d).status == decide_pp(m).status);
    }
  }
}

TEST_CASE("gapify", "[construction][transform]") {
  SECTION("C(6) keeps four informative states and its status") {
    const auto f = counterexample(6);
    const auto g = gapify(f.matrix);
    REQUIRE(g.max_state_count() == 4);
    for (std::size_t c = 0; c < g.size(); ++c) {
      for (const auto& s : g[c].states()) REQUIRE(s.size() >= 2);
      REQUIRE(g[c].name() == f.matrix[c].name());
    }
    REQUIRE(decide_pp(g).incompatible());
    for (std::size_t drop = 0; drop < g.size(); ++drop) REQUIRE(decide_pp(g.without(drop)).compatible());
  }
  SECTION("all-singleton character loses its coverage") {
    auto taxa = oracle::numbered_taxa(5);
    const auto g = gapify(oracle::matrix_of(taxa, {{0, 1, 2, 3, 4}}));
    REQUIRE(g[0].covered().empty());
    REQUIRE(g[0].state_count() == 0);
  }
  SECTION("display is unchanged by removing singletons") {
    std::mt19937 rng(73);
    for (int trial = 0; trial < 100; ++trial) {
      const int k = 4 + trial % 6;
      auto taxa = oracle::numbered_taxa(k);
      const oracle::Column col = oracle::random_column(k, 2 + trial % 5, 0.1, rng);
      const Character c = oracle::character_of(col);
      const Tree t = oracle::to_tree(oracle::random_binary_tree(k, rng), taxa);
      const Character gapped = gap_singletons(c);
      REQUIRE(displays_character(t, c) == displays_character(t, gapped));
      REQUIRE(oracle::convex(t, oracle::column_of(gapped)) == oracle::convex(t, col));
    }
  }
  SECTION("status preserved on small random matrices") {
    std::mt19937 rng(79);
    for (int trial = 0; trial < 80; ++trial) {
      const int k = 4 + trial % 4;
      auto taxa = oracle::numbered_taxa(k);
      std::vector<oracle::Column> cols;
      for (int c = 0; c < 3; ++c) cols.push_back(oracle::random_column(k, 3 + trial % 3, 0.0, rng));
      const auto m = oracle::matrix_of(taxa, cols);
      REQUIRE(decide_pp(gapify(m)).status == decide_pp(m).status);
    }
  }
}
