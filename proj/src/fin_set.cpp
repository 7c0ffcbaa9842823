#include "finstat/fin_set.hpp"

#include <utility>

#include "finstat/errors.hpp"

namespace finstat {

FinSet::FinSet(std::vector<std::string> labels) {
  if (labels.empty()) {
    throw SizeError("FinSet: need at least one label");
  }
  auto data = std::make_shared<Data>();
  data->labels = std::move(labels);
  for (std::size_t i = 0; i < data->labels.size(); ++i) {
    auto [it, fresh] = data->index.emplace(data->labels[i], i);
    if (!fresh) {
      throw DuplicateName("FinSet: duplicate label '" + data->labels[i] + "'");
    }
  }
  d_ = std::move(data);
}

std::optional<std::size_t> FinSet::find(std::string_view label) const {
  auto it = d_->index.find(label);
  if (it == d_->index.end()) return std::nullopt;
  return it->second;
}

FinSet product(const FinSet& a, const FinSet& b) {
  std::vector<std::string> labels;
  labels.reserve(a.size() * b.size());
  for (const auto& la : a.labels()) {
    for (const auto& lb : b.labels()) {
      labels.push_back(la + "\xE2\x8A\x97" + lb);  // ⊗
    }
  }
  return FinSet(std::move(labels));
}

FinSet disjoint_union(const FinSet& base, const std::vector<FinSet>& parts) {
  if (parts.empty()) {
    throw EmptyFamily("disjoint_union: no parts");
  }
  if (parts.size() != base.size()) {
    throw SizeError("disjoint_union: need one part per base element");
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (const auto& lu : parts[i].labels()) {
      labels.push_back(base.label(i) + ":" + lu);
    }
  }
  return FinSet(std::move(labels));
}

}  // namespace finstat
