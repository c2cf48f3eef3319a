#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "phylocompat/character.hpp"
#include "phylocompat/tree.hpp"

namespace phylocompat {

/// Malformed input text; line and column are 1-based (column counts fields
/// for matrices and characters for Newick).
class ParseError : public DomainError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  /// The diagnostic without the position prefix.
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

inline constexpr std::string_view kGapToken = "?";

/// Tab-separated matrix: a header row "taxon<TAB>name..." followed by one row
/// per taxon. Tokens are compared for equality only; "?" and "-" are gaps.
CharacterMatrix parse_matrix(std::string_view text);

/// Inverse of parse_matrix. Characters carrying state labels write those,
/// otherwise the state index. parse_matrix(serialize_matrix(m)) reproduces
/// the text byte for byte.
std::string serialize_matrix(const CharacterMatrix& matrix);

/// One Newick tree. Leaf names must be exactly the labels of `taxa`; branch
/// lengths, internal labels and [comments] are ignored. Degree-2 vertices are
/// suppressed.
Tree parse_newick(std::string_view text, std::shared_ptr<const TaxonSet> taxa);

/// Newick with the taxon set taken from the leaves in order of appearance.
Tree parse_newick(std::string_view text);

/// Every non-empty line parsed as a tree over `taxa`.
std::vector<Tree> parse_newick_lines(std::string_view text, std::shared_ptr<const TaxonSet> taxa);

/// Canonical Newick: degree-2 vertices suppressed, rooted next to the leaf
/// with the smallest taxon id, children ordered by smallest taxon id.
std::string serialize_newick(const Tree& tree);

}  // namespace phylocompat
