#include "phylocompat/taxa.hpp"

#include <algorithm>
#include <iterator>

namespace phylocompat {

TaxonSubset make_subset(std::vector<TaxonId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

bool is_subset(const TaxonSubset& inner, const TaxonSubset& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

bool contains(const TaxonSubset& set, TaxonId id) {
  return std::binary_search(set.begin(), set.end(), id);
}

TaxonSubset subset_union(const TaxonSubset& lhs, const TaxonSubset& rhs) {
  TaxonSubset out;
  std::set_union(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::back_inserter(out));
  return out;
}

TaxonSubset subset_intersection(const TaxonSubset& lhs, const TaxonSubset& rhs) {
  TaxonSubset out;
  std::set_intersection(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(),
                        std::back_inserter(out));
  return out;
}

TaxonSubset subset_difference(const TaxonSubset& lhs, const TaxonSubset& rhs) {
  TaxonSubset out;
  std::set_difference(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::back_inserter(out));
  return out;
}

bool disjoint(const TaxonSubset& lhs, const TaxonSubset& rhs) {
  auto l = lhs.begin();
  auto r = rhs.begin();
  while (l != lhs.end() && r != rhs.end()) {
    if (*l == *r) return false;
    if (*l < *r) {
      ++l;
    } else {
      ++r;
    }
  }
  return true;
}

TaxonSet::TaxonSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw DomainError("taxon labels must be non-empty");
    if (!index_.emplace(labels_[i], static_cast<TaxonId>(i)).second) {
      throw DomainError("duplicate taxon label '" + labels_[i] + "'");
    }
  }
}

TaxonSet TaxonSet::structured(int n) {
  if (n < 4 || n % 2 != 0) {
    throw DomainError("structured taxon set needs an even n >= 4, got " + std::to_string(n));
  }
  std::vector<std::string> labels;
  labels.reserve(2 * static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    labels.push_back("a" + std::to_string(i));
    labels.push_back("b" + std::to_string(i));
  }
  TaxonSet out(std::move(labels));
  out.half_ = n;
  return out;
}

const std::string& TaxonSet::label(TaxonId id) const {
  if (id >= labels_.size()) throw DomainError("taxon id out of range: " + std::to_string(id));
  return labels_[id];
}

std::optional<TaxonId> TaxonSet::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TaxonId TaxonSet::id(std::string_view label) const {
  if (auto found = find(label)) return *found;
  throw DomainError("unknown taxon '" + std::string(label) + "'");
}

TaxonSubset TaxonSet::all() const {
  TaxonSubset out(labels_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<TaxonId>(i);
  return out;
}

TaxonSubset TaxonSet::subset_of(std::span<const std::string> labels) const {
  std::vector<TaxonId> ids;
  ids.reserve(labels.size());
  for (const auto& l : labels) ids.push_back(id(l));
  return make_subset(std::move(ids));
}

std::string TaxonSet::format(const TaxonSubset& subset) const {
  std::string out = "{";
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i) out += ',';
    out += label(subset[i]);
  }
  return out + "}";
}

void TaxonSet::require_structured(int i) const {
  if (!is_structured()) throw DomainError("taxon set has no structured a/b form");
  if (i < 1 || i > half_) {
    throw DomainError("structured index " + std::to_string(i) + " outside [1, " +
                      std::to_string(half_) + "]");
  }
}

TaxonId TaxonSet::a(int i) const {
  require_structured(i);
  return static_cast<TaxonId>(2 * (i - 1));
}

TaxonId TaxonSet::b(int i) const {
  require_structured(i);
  return static_cast<TaxonId>(2 * (i - 1) + 1);
}

TaxonSubset TaxonSet::x_le(int i) const {
  if (!is_structured()) throw DomainError("taxon set has no structured a/b form");
  TaxonSubset out;
  for (int j = 1; j <= std::min(i, half_); ++j) {
    out.push_back(a(j));
    out.push_back(b(j));
  }
  return out;
}

TaxonSubset TaxonSet::x_ge(int i) const {
  if (!is_structured()) throw DomainError("taxon set has no structured a/b form");
  TaxonSubset out;
  for (int j = std::max(i, 1); j <= half_; ++j) {
    out.push_back(a(j));
    out.push_back(b(j));
  }
  return out;
}

}  // namespace phylocompat
