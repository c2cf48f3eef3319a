#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "phylocompat/construction.hpp"
#include "phylocompat/tree.hpp"

using namespace phylocompat;
using testing_support::parse_partition;

TEST_CASE("structured taxon set accessors", "[core]") {
  const TaxonSet x = TaxonSet::structured(6);
  REQUIRE(x.size() == 12);
  REQUIRE(x.label(x.a(1)) == "a1");
  REQUIRE(x.label(x.b(6)) == "b6");
  REQUIRE(x.x_le(0).empty());
  REQUIRE(x.x_ge(7).empty());
  REQUIRE(x.format(x.x_le(2)) == "{a1,b1,a2,b2}");
  REQUIRE(x.format(x.x_ge(6)) == "{a6,b6}");
  REQUIRE(subset_union(x.x_le(3), x.x_ge(4)) == x.all());
  REQUIRE_THROWS_AS(TaxonSet::structured(5), DomainError);
  REQUIRE_THROWS_AS(TaxonSet::structured(2), DomainError);
  REQUIRE_THROWS_AS(x.a(7), DomainError);
}

TEST_CASE("taxon labels must be unique and non-empty", "[core]") {
  REQUIRE_THROWS_AS(TaxonSet({"x", "y", "x"}), DomainError);
  REQUIRE_THROWS_AS(TaxonSet({"x", ""}), DomainError);
  const TaxonSet t({"p", "q"});
  REQUIRE(t.find("q") == TaxonId{1});
  REQUIRE_FALSE(t.find("r"));
  REQUIRE_THROWS_AS(t.id("r"), DomainError);
}

TEST_CASE("normalize drops empty states and orders by smallest member", "[core][normalize]") {
  const TaxonSet x = TaxonSet::structured(4);
  const Character raw(x.size(), {{x.a(1)}, {}, {x.b(1)}});
  const Character norm = normalize(raw);
  REQUIRE(norm.states().size() == 2);
  REQUIRE(format_character(norm, x) == "a1|b1");

  SECTION("chi_2 at n=4 written with empty outer blocks") {
    const Character chi2(x.size(), {x.x_le(0), {x.a(1)}, {x.b(1)}, {x.a(2), x.a(3)},
                                    {x.b(2), x.b(3)}, {x.a(4)}, {x.b(4)}, x.x_ge(5)});
    REQUIRE(format_character(normalize(chi2), x) == "a1|b1|a2a3|b2b3|a4|b4");
  }
  SECTION("idempotent") {
    REQUIRE(normalize(norm).states() == norm.states());
    REQUIRE(normalize(norm) == norm);
  }
  SECTION("state order does not affect equality") {
    const Character swapped(x.size(), {{x.b(1)}, {x.a(1)}});
    REQUIRE(swapped == raw);
    REQUIRE(normalize(swapped).states() == norm.states());
  }
}

TEST_CASE("overlapping or out-of-range states are malformed", "[core]") {
  REQUIRE_THROWS_AS(Character(4, {{0, 1}, {1, 2}}), MalformedCharacter);
  REQUIRE_THROWS_AS(Character(4, {{0, 7}}), MalformedCharacter);
  REQUIRE_THROWS_AS(Character(4, {{0}, {1}}, "c", {"only-one-label"}), MalformedCharacter);
}

TEST_CASE("restrict_character", "[core][restrict]") {
  const auto fam = counterexample(6);
  const TaxonSet& x = fam.taxa();
  const Character& omega_a = fam.matrix[fam.omega_a()];

  SECTION("Omega_A on X_le(2) matches hand intersection") {
    const Character got = restrict_character(omega_a, x.x_le(2));
    // Oracle: intersect each state with X_le(2) by label.
    std::vector<std::set<std::string>> expected;
    for (const auto& state : omega_a.states()) {
      std::set<std::string> kept;
      for (TaxonId t : state) {
        const std::string& l = x.label(t);
        if (l == "a1" || l == "b1" || l == "a2" || l == "b2") kept.insert(l);
      }
      if (!kept.empty()) expected.push_back(kept);
    }
    REQUIRE(expected.size() == got.states().size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      std::set<std::string> labels;
      for (TaxonId t : got.states()[i]) labels.insert(x.label(t));
      REQUIRE(labels == expected[i]);
    }
    REQUIRE(format_character(got, x) == "a1b1b2|a2");
  }
  SECTION("full restriction is normalization") {
    for (const auto& c : fam.matrix.characters()) {
      REQUIRE(restrict_character(c, x.all()).states() == normalize(c).states());
    }
  }
  SECTION("empty restriction leaves no states") {
    REQUIRE(restrict_character(omega_a, {}).state_count() == 0);
  }
  SECTION("taxa outside the universe") {
    REQUIRE_THROWS_AS(restrict_character(omega_a, {0, 99}), DomainError);
  }
}

TEST_CASE("normalize and restriction commute on random characters", "[core][property]") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 3 + trial % 6;
    const auto col = oracle::random_column(k, 1 + trial % 5, 0.2, rng);
    std::vector<TaxonSubset> parts(6);
    for (int t = 0; t < k; ++t) {
      if (col[t] >= 0) parts[static_cast<std::size_t>(col[t])].push_back(static_cast<TaxonId>(t));
    }
    const Character raw(static_cast<std::size_t>(k), parts);
    TaxonSubset keep;
    for (int t = 0; t < k; ++t) {
      if (rng() % 2) keep.push_back(static_cast<TaxonId>(t));
    }
    REQUIRE(restrict_character(normalize(raw), keep).states() ==
            normalize(restrict_character(raw, keep)).states());
    REQUIRE(normalize(normalize(raw)).states() == normalize(raw).states());
  }
}

TEST_CASE("tree builder rejects malformed trees", "[core][tree]") {
  auto taxa = oracle::numbered_taxa(3);
  SECTION("cycle") {
    TreeBuilder b(taxa);
    auto c = b.add_vertex();
    auto d = b.add_vertex();
    b.add_edge(b.add_leaf(TaxonId{0}), c);
    b.add_edge(c, d);
    b.add_edge(d, b.add_leaf(TaxonId{1}));
    b.add_edge(b.add_leaf(TaxonId{2}), c);
    auto e = b.add_vertex();
    b.add_edge(c, e);
    b.add_edge(e, d);
    REQUIRE_THROWS_AS(std::move(b).build(), DomainError);
  }
  SECTION("disconnected") {
    TreeBuilder b(taxa);
    auto c = b.add_vertex();
    b.add_edge(b.add_leaf(TaxonId{0}), c);
    b.add_edge(b.add_leaf(TaxonId{1}), c);
    b.add_leaf(TaxonId{2});
    REQUIRE_THROWS_AS(std::move(b).build(), DomainError);
  }
  SECTION("duplicate edge and self loop") {
    TreeBuilder b(taxa);
    auto c = b.add_vertex();
    auto l = b.add_leaf(TaxonId{0});
    b.add_edge(l, c);
    REQUIRE_THROWS_AS(b.add_edge(c, l), DomainError);
    REQUIRE_THROWS_AS(b.add_edge(c, c), DomainError);
  }
  SECTION("leaf used twice") {
    TreeBuilder b(taxa);
    b.add_leaf(TaxonId{0});
    REQUIRE_THROWS_AS(b.add_leaf(TaxonId{0}), DomainError);
  }
}

TEST_CASE("restrict_tree on the lobster keeps degree-2 vertices", "[core][restrict]") {
  const Tree a = lobster_a(6);
  const TaxonSet& x = a.taxa();
  const TaxonSubset s{x.a(1), x.b(1), x.b(2)};
  const Tree kept = restrict_tree(a, s);
  std::set<std::string> names;
  for (VertexId v = 0; v < kept.vertex_count(); ++v) names.insert(kept.vertex_name(v));
  REQUIRE(names == std::set<std::string>{"a1", "b1", "b2", "u1", "v1"});
  REQUIRE(kept.degree(*kept.find_vertex("u1")) == 2);

  const Tree smooth = restrict_tree(a, s, true);
  REQUIRE(smooth.vertex_count() == 4);
  REQUIRE(smooth.degree(*smooth.find_vertex("v1")) == 3);
  REQUIRE_FALSE(smooth.find_vertex("u1"));
}

TEST_CASE("restrict_tree identity, paths and errors", "[core][restrict]") {
  auto taxa = oracle::numbered_taxa(5);
  // Caterpillar t0 t1 | c1 - c2 - c3 | t3 t4 with t2 on c2.
  const Tree cat = tree_from_edges(taxa, {{"t0", "c1"}, {"t1", "c1"}, {"c1", "c2"}, {"t2", "c2"},
                                          {"c2", "c3"}, {"t3", "c3"}, {"t4", "c3"}});
  const Tree whole = restrict_tree(cat, taxa->all());
  REQUIRE(whole.vertex_count() == cat.vertex_count());
  REQUIRE(same_topology(whole, cat));

  for (TaxonId p = 0; p < 5; ++p) {
    for (TaxonId q = p + 1; q < 5; ++q) {
      const Tree r = restrict_tree(cat, {p, q});
      std::set<std::string> got;
      for (VertexId v = 0; v < r.vertex_count(); ++v) got.insert(r.vertex_name(v));
      std::set<std::string> want;
      for (VertexId v : oracle::dfs_path(cat, cat.leaf_vertex(p), cat.leaf_vertex(q))) {
        want.insert(cat.vertex_name(v));
      }
      REQUIRE(got == want);
      REQUIRE(r.edge_count() + 1 == want.size());
    }
  }
  REQUIRE_THROWS_AS(restrict_tree(cat, {}), DomainError);
  const Tree part = restrict_tree(cat, {0, 1, 2});
  REQUIRE_THROWS_AS(restrict_tree(part, {3}), DomainError);
}

TEST_CASE("restriction composes", "[core][restrict][property]") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 4 + trial % 5;
    auto taxa = oracle::numbered_taxa(k);
    const Tree t = oracle::to_tree(oracle::random_binary_tree(k, rng), taxa);
    TaxonSubset outer, inner;
    for (TaxonId x = 0; x < static_cast<TaxonId>(k); ++x) {
      if (rng() % 4 != 0) outer.push_back(x);
    }
    if (outer.empty()) outer.push_back(0);
    for (TaxonId x : outer) {
      if (rng() % 2) inner.push_back(x);
    }
    if (inner.empty()) inner.push_back(outer.front());
    for (bool suppress : {false, true}) {
      const Tree direct = restrict_tree(t, inner, suppress);
      const Tree twice = restrict_tree(restrict_tree(t, outer, false), inner, suppress);
      REQUIRE(direct.vertex_count() == twice.vertex_count());
      REQUIRE(oracle::isomorphic(direct, twice));
    }
  }
}

TEST_CASE("splits of small trees", "[core][splits]") {
  auto taxa = std::make_shared<const TaxonSet>(TaxonSet({"a", "b", "c", "d"}));
  const Tree q = tree_from_edges(taxa, {{"a", "x"}, {"b", "x"}, {"x", "y"}, {"c", "y"}, {"d", "y"}});
  const auto s = splits(q);
  REQUIRE(s.size() == 1);
  REQUIRE(s.front().side == TaxonSubset{0, 1});

  const Tree star = tree_from_edges(taxa, {{"a", "x"}, {"b", "x"}, {"c", "x"}, {"d", "x"}});
  REQUIRE(splits(star).empty());
}

TEST_CASE("split sets match a renamed copy of A(4)", "[core][splits]") {
  const Tree a = lobster_a(4);
  // The same shape written by hand with different internal names and vertex order.
  const Tree copy = tree_from_edges(
      a.taxa_ptr(), {{"p3", "a4"}, {"p3", "q3"}, {"q3", "b3"}, {"q3", "b4"}, {"p2", "p3"},
                     {"p2", "q2"}, {"q2", "a2"}, {"q2", "a3"}, {"p1", "p2"}, {"p1", "a1"},
                     {"p1", "q1"}, {"q1", "b1"}, {"q1", "b2"}});
  REQUIRE(splits(a) == splits(copy));
  REQUIRE(oracle::isomorphic(a, copy));
  REQUIRE(same_topology(a, copy));
}

TEST_CASE("split equality coincides with brute-force isomorphism up to 6 leaves",
          "[core][splits][property]") {
  for (int k = 4; k <= 6; ++k) {
    auto taxa = oracle::numbered_taxa(k);
    std::vector<Tree> trees;
    std::mt19937 rng(static_cast<unsigned>(k));
    for (const auto& e : oracle::all_binary_trees(k)) {
      trees.push_back(oracle::to_tree(e, taxa));
      trees.push_back(oracle::to_tree(oracle::random_contraction(e, 0.4, rng), taxa));
    }
    // Pairs are checked against the quadratic oracle on a deterministic sample.
    const std::size_t step = k == 6 ? 7 : 1;
    for (std::size_t i = 0; i < trees.size(); ++i) {
      for (std::size_t j = i % step; j < trees.size(); j += step) {
        REQUIRE((splits(trees[i]) == splits(trees[j])) == oracle::isomorphic(trees[i], trees[j]));
      }
    }
  }
}

TEST_CASE("tree_from_splits inverts splits", "[core][splits][property]") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 150; ++trial) {
    const int k = 3 + trial % 8;
    auto taxa = oracle::numbered_taxa(k);
    const Tree t = oracle::to_tree(
        oracle::random_contraction(oracle::random_binary_tree(k, rng), 0.3, rng), taxa);
    const Tree back = tree_from_splits(taxa, taxa->all(), splits(t));
    REQUIRE(splits(back) == splits(t));
    REQUIRE(oracle::isomorphic(back, t));
  }
  auto taxa = oracle::numbered_taxa(4);
  REQUIRE_THROWS_AS(tree_from_splits(taxa, taxa->all(), {Split{{0, 1}}, Split{{0, 2}}}),
                    DomainError);
}

TEST_CASE("path and leaf queries", "[core][tree]") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 3 + trial % 7;
    auto taxa = oracle::numbered_taxa(k);
    const Tree t = oracle::to_tree(oracle::random_binary_tree(k, rng), taxa);
    REQUIRE(t.is_binary());
    REQUIRE(t.leaves() == taxa->all());
    for (VertexId u = 0; u < t.vertex_count(); ++u) {
      for (VertexId v = 0; v < t.vertex_count(); v += 3) {
        REQUIRE(t.path(u, v) == oracle::dfs_path(t, u, v));
      }
    }
  }
}
