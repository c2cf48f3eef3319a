#include "phylocompat/character.hpp"

#include <algorithm>
#include <numeric>

namespace phylocompat {

Character::Character(std::size_t universe, std::vector<TaxonSubset> states, std::string name,
                     std::vector<std::string> state_labels)
    : universe_(universe),
      states_(std::move(states)),
      name_(std::move(name)),
      state_labels_(std::move(state_labels)) {
  if (!state_labels_.empty() && state_labels_.size() != states_.size()) {
    throw MalformedCharacter("state label count does not match state count");
  }
  std::vector<char> seen(universe_, 0);
  for (auto& state : states_) {
    state = make_subset(std::move(state));
    for (TaxonId t : state) {
      if (t >= universe_) {
        throw MalformedCharacter("character '" + name_ + "' references taxon id " +
                                 std::to_string(t) + " outside the taxon set");
      }
      if (seen[t]) {
        throw MalformedCharacter("character '" + name_ + "' has overlapping states at taxon id " +
                                 std::to_string(t));
      }
      seen[t] = 1;
    }
  }
}

std::size_t Character::state_count() const {
  return static_cast<std::size_t>(
      std::count_if(states_.begin(), states_.end(), [](const auto& s) { return !s.empty(); }));
}

TaxonSubset Character::covered() const {
  std::vector<TaxonId> all;
  for (const auto& s : states_) all.insert(all.end(), s.begin(), s.end());
  return make_subset(std::move(all));
}

std::size_t Character::state_of(TaxonId taxon) const {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (contains(states_[i], taxon)) return i;
  }
  return npos;
}

Character Character::renamed(std::string name) const {
  Character out = *this;
  out.name_ = std::move(name);
  return out;
}

bool operator==(const Character& lhs, const Character& rhs) {
  return lhs.universe_ == rhs.universe_ && normalize(lhs).states_ == normalize(rhs).states_;
}

Character normalize(const Character& character) {
  const auto& states = character.states();
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!states[i].empty()) order.push_back(i);
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t l, std::size_t r) { return states[l].front() < states[r].front(); });

  std::vector<TaxonSubset> out_states;
  std::vector<std::string> out_labels;
  for (std::size_t i : order) {
    out_states.push_back(states[i]);
    if (character.has_state_labels()) out_labels.push_back(character.state_labels()[i]);
  }
  return Character(character.universe(), std::move(out_states), character.name(),
                   std::move(out_labels));
}

Character restrict_character(const Character& character, const TaxonSubset& taxa) {
  if (!taxa.empty() && taxa.back() >= character.universe()) {
    throw DomainError("restriction set is not a subset of the character's taxa");
  }
  std::vector<TaxonSubset> states;
  states.reserve(character.states().size());
  for (const auto& s : character.states()) states.push_back(subset_intersection(s, taxa));
  return normalize(
      Character(character.universe(), std::move(states), character.name(),
                character.state_labels()));
}

Character gap_singletons(const Character& character) {
  std::vector<TaxonSubset> states;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < character.states().size(); ++i) {
    if (character.states()[i].size() < 2) continue;
    states.push_back(character.states()[i]);
    if (character.has_state_labels()) labels.push_back(character.state_labels()[i]);
  }
  return normalize(
      Character(character.universe(), std::move(states), character.name(), std::move(labels)));
}

CharacterMatrix::CharacterMatrix(std::shared_ptr<const TaxonSet> taxa,
                                 std::vector<Character> characters)
    : taxa_(std::move(taxa)), characters_(std::move(characters)) {
  if (!taxa_) throw DomainError("character matrix needs a taxon set");
  for (const auto& c : characters_) {
    if (c.universe() != taxa_->size()) {
      throw DomainError("character '" + c.name() + "' is defined over " +
                        std::to_string(c.universe()) + " taxa, matrix has " +
                        std::to_string(taxa_->size()));
    }
  }
}

CharacterMatrix::CharacterMatrix(TaxonSet taxa, std::vector<Character> characters)
    : CharacterMatrix(std::make_shared<const TaxonSet>(std::move(taxa)), std::move(characters)) {}

std::size_t CharacterMatrix::max_state_count() const {
  std::size_t out = 0;
  for (const auto& c : characters_) out = std::max(out, c.state_count());
  return out;
}

std::optional<std::size_t> CharacterMatrix::find(std::string_view name) const {
  for (std::size_t i = 0; i < characters_.size(); ++i) {
    if (characters_[i].name() == name) return i;
  }
  return std::nullopt;
}

CharacterMatrix CharacterMatrix::subset(const std::vector<std::size_t>& indices) const {
  std::vector<Character> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(characters_.at(i));
  return CharacterMatrix(taxa_, std::move(out));
}

CharacterMatrix CharacterMatrix::without(std::size_t index) const {
  if (index >= characters_.size()) throw DomainError("character index out of range");
  std::vector<Character> out = characters_;
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(index));
  return CharacterMatrix(taxa_, std::move(out));
}

CharacterMatrix CharacterMatrix::with_characters(std::vector<Character> characters) const {
  return CharacterMatrix(taxa_, std::move(characters));
}

std::string format_character(const Character& character, const TaxonSet& taxa) {
  std::string out;
  bool first = true;
  const Character norm = normalize(character);
  for (const auto& state : norm.states()) {
    if (!first) out += '|';
    first = false;
    for (TaxonId t : state) out += taxa.label(t);
  }
  return out;
}

}  // namespace phylocompat
