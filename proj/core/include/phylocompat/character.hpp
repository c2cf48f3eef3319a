#pragma once

#include <memory>
#include <string>
#include <vector>

#include "phylocompat/taxa.hpp"

namespace phylocompat {

class MalformedCharacter : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A partition of a subset of the taxa into disjoint states. Taxa outside
/// every state are gapped: they carry no information for this character.
///
/// Construction validates ranges and disjointness but keeps the state list
/// as given (including empty states); `normalize` produces the canonical form.
/// Optional state labels ride along with their states so that file tokens
/// survive a parse/serialize round trip.
class Character {
 public:
  Character() = default;
  Character(std::size_t universe, std::vector<TaxonSubset> states, std::string name = {},
            std::vector<std::string> state_labels = {});

  std::size_t universe() const { return universe_; }
  const std::vector<TaxonSubset>& states() const { return states_; }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& state_labels() const { return state_labels_; }
  bool has_state_labels() const { return !state_labels_.empty(); }

  std::size_t state_count() const;
  TaxonSubset covered() const;
  bool is_full() const { return covered().size() == universe_; }
  /// Index into states(), or npos for a gapped taxon.
  std::size_t state_of(TaxonId taxon) const;

  Character renamed(std::string name) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Semantic equality: same universe and same partition after normalization.
  friend bool operator==(const Character& lhs, const Character& rhs);

 private:
  std::size_t universe_ = 0;
  std::vector<TaxonSubset> states_;
  std::string name_;
  std::vector<std::string> state_labels_;
};

/// Drops empty states and orders states by their smallest taxon id.
Character normalize(const Character& character);

/// Intersects every state with `taxa` and normalizes.
Character restrict_character(const Character& character, const TaxonSubset& taxa);

/// Turns every singleton state into a gap.
Character gap_singletons(const Character& character);

/// Ordered characters over one taxon set.
class CharacterMatrix {
 public:
  CharacterMatrix() : taxa_(std::make_shared<const TaxonSet>()) {}
  explicit CharacterMatrix(std::shared_ptr<const TaxonSet> taxa,
                           std::vector<Character> characters = {});
  CharacterMatrix(TaxonSet taxa, std::vector<Character> characters = {});

  const TaxonSet& taxa() const { return *taxa_; }
  const std::shared_ptr<const TaxonSet>& taxa_ptr() const { return taxa_; }
  const std::vector<Character>& characters() const { return characters_; }
  const Character& operator[](std::size_t i) const { return characters_.at(i); }
  std::size_t size() const { return characters_.size(); }
  bool empty() const { return characters_.empty(); }

  std::size_t max_state_count() const;
  std::optional<std::size_t> find(std::string_view name) const;

  CharacterMatrix subset(const std::vector<std::size_t>& indices) const;
  CharacterMatrix without(std::size_t index) const;
  CharacterMatrix with_characters(std::vector<Character> characters) const;

 private:
  std::shared_ptr<const TaxonSet> taxa_;
  std::vector<Character> characters_;
};

/// Renders a character the way the family is usually written, e.g. a1b1b2|a2a3.
std::string format_character(const Character& character, const TaxonSet& taxa);

}  // namespace phylocompat
