#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "finstat/dist.hpp"
#include "finstat/fin_set.hpp"

namespace finstat {

// Function between finite sets, stored as the image index of each dom element.
class DetMap {
 public:
  // image[x] must index into cod; throws SizeError otherwise.
  DetMap(FinSet dom, FinSet cod, std::vector<std::size_t> image);

  static DetMap identity(const FinSet& s);

  const FinSet& dom() const { return dom_; }
  const FinSet& cod() const { return cod_; }
  std::size_t operator()(std::size_t x) const { return image_[x]; }
  const std::vector<std::size_t>& image() const { return image_; }
  bool surjective() const;

  // fibers()[y] lists the dom indices mapping to y, in dom order.
  std::vector<std::vector<std::size_t>> fibers() const;

  friend bool operator==(const DetMap& a, const DetMap& b) {
    return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.image_ == b.image_;
  }

 private:
  FinSet dom_;
  FinSet cod_;
  std::vector<std::size_t> image_;
};

// g after f; throws SpaceMismatch unless f.cod == g.dom.
DetMap compose(const DetMap& g, const DetMap& f);

// Stochastic matrix from dom to cod, row-major: row x is the output
// distribution given input x, at(x, y) = P(y | x). Rows get the same
// clamping/mass validation as Dist.
class Channel {
 public:
  Channel(FinSet dom, FinSet cod, std::vector<double> entries);

  static Channel identity(const FinSet& s);

  const FinSet& dom() const { return dom_; }
  const FinSet& cod() const { return cod_; }
  double at(std::size_t x, std::size_t y) const {
    return entries_[x * cod_.size() + y];
  }
  std::span<const double> row(std::size_t x) const {
    return {entries_.data() + x * cod_.size(), cod_.size()};
  }
  Dist row_dist(std::size_t x) const;
  const std::vector<double>& entries() const { return entries_; }

  friend bool operator==(const Channel& a, const Channel& b) {
    return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.entries_ == b.entries_;
  }

 private:
  FinSet dom_;
  FinSet cod_;
  std::vector<double> entries_;
};

// Largest entrywise difference; throws SpaceMismatch on different shapes.
double max_abs_diff(const Channel& a, const Channel& b);

}  // namespace finstat
