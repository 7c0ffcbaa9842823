#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace finstat {

// Immutable finite set of distinct labels. Label order is part of the
// identity: distributions and channel rows index by it, and product /
// disjoint-union label schemes depend on it. Cheap to copy (shared state).
class FinSet {
 public:
  // Throws SizeError when empty, DuplicateName on repeated labels.
  explicit FinSet(std::vector<std::string> labels);

  std::size_t size() const { return d_->labels.size(); }
  const std::vector<std::string>& labels() const { return d_->labels; }
  const std::string& label(std::size_t i) const { return d_->labels.at(i); }
  std::optional<std::size_t> find(std::string_view label) const;

  friend bool operator==(const FinSet& a, const FinSet& b) {
    return a.d_ == b.d_ || a.d_->labels == b.d_->labels;
  }
  friend bool operator!=(const FinSet& a, const FinSet& b) { return !(a == b); }

 private:
  struct Data {
    std::vector<std::string> labels;
    std::map<std::string, std::size_t, std::less<>> index;
  };
  std::shared_ptr<const Data> d_;
};

// Product set with labels "x⊗y", ordered a-major: index = ia * |b| + ib.
FinSet product(const FinSet& a, const FinSet& b);

// Disjoint union indexed by `base`, one part per base element, labels
// "x:u" (base label, ':', part label). Base labels containing ':' can
// collide and then surface as DuplicateName from the FinSet constructor.
FinSet disjoint_union(const FinSet& base, const std::vector<FinSet>& parts);

}  // namespace finstat
