#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace phylocompat {

using TaxonId = std::uint32_t;

/// Sorted, duplicate-free list of taxon ids.
using TaxonSubset = std::vector<TaxonId>;

/// Raised when an argument violates an operation's precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

TaxonSubset make_subset(std::vector<TaxonId> ids);
bool is_subset(const TaxonSubset& inner, const TaxonSubset& outer);
bool contains(const TaxonSubset& set, TaxonId id);
TaxonSubset subset_union(const TaxonSubset& lhs, const TaxonSubset& rhs);
TaxonSubset subset_intersection(const TaxonSubset& lhs, const TaxonSubset& rhs);
TaxonSubset subset_difference(const TaxonSubset& lhs, const TaxonSubset& rhs);
bool disjoint(const TaxonSubset& lhs, const TaxonSubset& rhs);

/// Ordered set of unique taxon labels. Taxon ids are positions in label order.
///
/// The structured form (n even, n >= 4) lays the 2n labels out as
/// a1, b1, a2, b2, ..., an, bn so that every prefix of the label order
/// is one of the X_le(i) blocks used by the counterexample family.
class TaxonSet {
 public:
  TaxonSet() = default;
  explicit TaxonSet(std::vector<std::string> labels);

  static TaxonSet structured(int n);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::string& label(TaxonId id) const;
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<TaxonId> find(std::string_view label) const;
  TaxonId id(std::string_view label) const;
  TaxonSubset all() const;
  TaxonSubset subset_of(std::span<const std::string> labels) const;
  std::string format(const TaxonSubset& subset) const;

  bool is_structured() const { return half_ != 0; }
  int structured_n() const { return half_; }
  TaxonId a(int i) const;
  TaxonId b(int i) const;
  /// {a_j, b_j : j <= i}; empty for i <= 0, clamped at n.
  TaxonSubset x_le(int i) const;
  /// {a_j, b_j : j >= i}; empty for i > n, clamped at 1.
  TaxonSubset x_ge(int i) const;

  friend bool operator==(const TaxonSet& lhs, const TaxonSet& rhs) {
    return lhs.labels_ == rhs.labels_;
  }

 private:
  void require_structured(int i) const;

  std::vector<std::string> labels_;
  std::unordered_map<std::string, TaxonId> index_;
  int half_ = 0;
};

}  // namespace phylocompat
