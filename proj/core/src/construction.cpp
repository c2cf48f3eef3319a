#include "phylocompat/construction.hpp"

#include <map>

namespace phylocompat {

namespace {

void require_family_n(int n) {
  if (n < 4 || n % 2 != 0) {
    throw DomainError("the counterexample family needs an even n >= 4, got " + std::to_string(n));
  }
}

/// Assembles states from pieces that may name out-of-range indices; those
/// pieces are dropped.
class StateBuilder {
 public:
  explicit StateBuilder(const TaxonSet& taxa) : taxa_(taxa), n_(taxa.structured_n()) {}

  TaxonSubset a(int h) const { return in_range(h) ? TaxonSubset{taxa_.a(h)} : TaxonSubset{}; }
  TaxonSubset b(int h) const { return in_range(h) ? TaxonSubset{taxa_.b(h)} : TaxonSubset{}; }
  TaxonSubset le(int i) const { return taxa_.x_le(i); }
  TaxonSubset ge(int i) const { return taxa_.x_ge(i); }

  template <typename... Parts>
  static TaxonSubset join(const Parts&... parts) {
    TaxonSubset out;
    ((out = subset_union(out, parts)), ...);
    return out;
  }

 private:
  bool in_range(int h) const { return h >= 1 && h <= n_; }
  const TaxonSet& taxa_;
  int n_;
};

class NamedTreeBuilder {
 public:
  explicit NamedTreeBuilder(int n)
      : taxa_(std::make_shared<const TaxonSet>(TaxonSet::structured(n))), builder_(taxa_) {}

  VertexId vertex(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    VertexId v = taxa_->find(name) ? builder_.add_leaf(name) : builder_.add_vertex(name);
    ids_.emplace(name, v);
    return v;
  }
  void edge(const std::string& u, const std::string& v) { builder_.add_edge(vertex(u), vertex(v)); }
  void path(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i + 1 < names.size(); ++i) edge(names[i], names[i + 1]);
  }
  void cherry(const std::string& hub, const std::string& x, const std::string& y) {
    edge(hub, x);
    edge(hub, y);
  }
  Tree build() && { return std::move(builder_).build(); }

 private:
  std::shared_ptr<const TaxonSet> taxa_;
  TreeBuilder builder_;
  std::map<std::string, VertexId> ids_;
};

std::string a(int i) { return "a" + std::to_string(i); }
std::string b(int i) { return "b" + std::to_string(i); }
std::string u(int i) { return "u" + std::to_string(i); }
std::string v(int i) { return "v" + std::to_string(i); }

/// Central path u1..u_{n-1} with pendant cherries; `a_side` picks which
/// letter the cherry at odd positions uses (A: b-cherries at odd i).
Tree plain_lobster(int n, bool is_a) {
  require_family_n(n);
  NamedTreeBuilder t(n);
  const auto& odd_leaf = is_a ? b : a;
  const auto& even_leaf = is_a ? a : b;
  std::vector<std::string> spine{is_a ? a(1) : b(1)};
  for (int i = 1; i <= n - 1; ++i) spine.push_back(u(i));
  spine.push_back(is_a ? a(n) : b(n));
  t.path(spine);
  for (int i = 1; i <= n - 1; ++i) {
    t.edge(u(i), v(i));
    if (i % 2 == 1) {
      t.cherry(v(i), odd_leaf(i), odd_leaf(i + 1));
    } else {
      t.cherry(v(i), even_leaf(i), even_leaf(i + 1));
    }
  }
  return std::move(t).build();
}

/// Shared body of A_iB and A^iB: vertex u_gap/v_gap is replaced by uA, uB,
/// with A-style cherries before the gap and B-style after.
Tree glued_lobster(int n, int gap, const std::string& at_ua, const std::string& at_ub) {
  NamedTreeBuilder t(n);
  std::vector<std::string> spine{a(1)};
  for (int j = 1; j < gap; ++j) spine.push_back(u(j));
  spine.push_back("uA");
  spine.push_back("uB");
  for (int j = gap + 1; j <= n - 1; ++j) spine.push_back(u(j));
  spine.push_back(b(n));
  t.path(spine);
  t.edge("uA", at_ua);
  t.edge("uB", at_ub);
  for (int j = 1; j <= n - 1; ++j) {
    if (j == gap) continue;
    t.edge(u(j), v(j));
    const bool odd = j % 2 == 1;
    if (j < gap) {
      odd ? t.cherry(v(j), b(j), b(j + 1)) : t.cherry(v(j), a(j), a(j + 1));
    } else {
      odd ? t.cherry(v(j), a(j), a(j + 1)) : t.cherry(v(j), b(j), b(j + 1));
    }
  }
  return std::move(t).build();
}

}  // namespace

std::size_t FamilyInstance::chi(int j) const {
  if (j < 2 || j > n - 2) throw DomainError("chi_j is defined for 2 <= j <= n-2");
  return static_cast<std::size_t>(j - 1);
}

std::size_t FamilyInstance::phi(int j) const {
  if (j < 3 || j > n - 1) throw DomainError("phi_j is defined for 3 <= j <= n-1");
  return static_cast<std::size_t>((n - 3) + (j - 2));
}

FamilyInstance counterexample(int n) {
  require_family_n(n);
  auto taxa = std::make_shared<const TaxonSet>(TaxonSet::structured(n));
  const StateBuilder s(*taxa);
  const std::size_t universe = taxa->size();
  std::vector<Character> chars;

  auto add = [&](std::string name, std::vector<TaxonSubset> states) {
    chars.push_back(normalize(Character(universe, std::move(states), std::move(name))));
  };

  add("Omega_A", {StateBuilder::join(s.a(1), s.b(1), s.b(2)), StateBuilder::join(s.a(2), s.ge(3))});
  for (int j = 2; j <= n - 2; ++j) {
    add("chi_" + std::to_string(j),
        {s.le(j - 2), s.a(j - 1), s.b(j - 1), StateBuilder::join(s.a(j), s.a(j + 1)),
         StateBuilder::join(s.b(j), s.b(j + 1)), s.a(j + 2), s.b(j + 2), s.ge(j + 3)});
  }
  for (int j = 3; j <= n - 1; ++j) {
    if (j % 2 == 0) {
      add("phi_" + std::to_string(j),
          {StateBuilder::join(s.le(j - 3), s.b(j - 2), s.b(j - 1)), s.a(j - 2), s.a(j - 1), s.b(j),
           s.b(j + 1), StateBuilder::join(s.a(j), s.a(j + 1), s.ge(j + 2))});
    } else {
      add("phi_" + std::to_string(j),
          {StateBuilder::join(s.le(j - 3), s.a(j - 2), s.a(j - 1)), s.b(j - 2), s.b(j - 1), s.a(j),
           s.a(j + 1), StateBuilder::join(s.b(j), s.b(j + 1), s.ge(j + 2))});
    }
  }
  add("Omega_B", {StateBuilder::join(s.le(n - 2), s.b(n - 1)),
                  StateBuilder::join(s.a(n - 1), s.a(n), s.b(n))});

  return FamilyInstance{n, CharacterMatrix(taxa, std::move(chars))};
}

Tree lobster_a(int n) { return plain_lobster(n, true); }
Tree lobster_b(int n) { return plain_lobster(n, false); }

Tree lobster_a_cross_b(int n, int i) {
  require_family_n(n);
  if (i < 2 || i > n - 2) throw DomainError("A_iB is defined for 2 <= i <= n-2");
  return i % 2 == 0 ? glued_lobster(n, i, a(i), b(i + 1)) : glued_lobster(n, i, b(i), a(i + 1));
}

Tree lobster_a_jagged_b(int n, int i) {
  require_family_n(n);
  if (i < 3 || i > n - 1) throw DomainError("A^iB is defined for 3 <= i <= n-1");
  return i % 2 == 0 ? glued_lobster(n, i - 1, a(i), b(i - 1))
                    : glued_lobster(n, i - 1, b(i), a(i - 1));
}

CharacterMatrix matrix_from_sequences(const std::vector<std::string>& taxa,
                                      const std::vector<std::string>& sequences) {
  if (taxa.size() != sequences.size()) throw DomainError("one sequence per taxon required");
  const std::size_t width = sequences.empty() ? 0 : sequences.front().size();
  for (const auto& seq : sequences) {
    if (seq.size() != width) throw DomainError("sequences must be aligned");
  }
  auto taxon_set = std::make_shared<const TaxonSet>(TaxonSet(taxa));
  std::vector<Character> chars;
  for (std::size_t col = 0; col < width; ++col) {
    std::map<char, TaxonSubset> by_symbol;
    for (std::size_t t = 0; t < sequences.size(); ++t) {
      by_symbol[sequences[t][col]].push_back(static_cast<TaxonId>(t));
    }
    std::vector<TaxonSubset> states;
    std::vector<std::string> labels;
    for (auto& [symbol, members] : by_symbol) {
      labels.emplace_back(1, symbol);
      states.push_back(std::move(members));
    }
    chars.push_back(normalize(Character(taxa.size(), std::move(states),
                                        "chi_" + std::to_string(col + 1), std::move(labels))));
  }
  return CharacterMatrix(taxon_set, std::move(chars));
}

CharacterMatrix fitch_example() {
  return matrix_from_sequences({"x1", "x2", "x3", "x4", "x5"},
                               {"AAA", "ACC", "CGC", "CCG", "GAG"});
}

CharacterMatrix duplicate_taxon(const CharacterMatrix& matrix, std::string_view taxon,
                                int copies) {
  if (copies < 1) throw DomainError("duplicate_taxon needs at least one copy");
  const TaxonId source = matrix.taxa().id(taxon);
  std::vector<std::string> labels = matrix.taxa().labels();
  std::vector<TaxonId> fresh;
  for (int k = 1; k <= copies; ++k) {
    std::string label = std::string(taxon) + "_dup" + std::to_string(k);
    while (matrix.taxa().find(label)) label += "'";
    fresh.push_back(static_cast<TaxonId>(labels.size()));
    labels.push_back(std::move(label));
  }
  auto taxa = std::make_shared<const TaxonSet>(TaxonSet(std::move(labels)));
  std::vector<Character> chars;
  for (const auto& c : matrix.characters()) {
    std::vector<TaxonSubset> states = c.states();
    const std::size_t home = c.state_of(source);
    if (home != Character::npos) states[home] = subset_union(states[home], fresh);
    chars.emplace_back(taxa->size(), std::move(states), c.name(), c.state_labels());
  }
  return CharacterMatrix(taxa, std::move(chars));
}

CharacterMatrix gapify(const CharacterMatrix& matrix) {
  std::vector<Character> chars;
  chars.reserve(matrix.size());
  for (const auto& c : matrix.characters()) chars.push_back(gap_singletons(c));
  return matrix.with_characters(std::move(chars));
}

}  // namespace phylocompat
