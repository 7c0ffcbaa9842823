#include "finstat/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "finstat/errors.hpp"
#include "internal.hpp"

namespace finstat {

DetMap::DetMap(FinSet dom, FinSet cod, std::vector<std::size_t> image)
    : dom_(std::move(dom)), cod_(std::move(cod)), image_(std::move(image)) {
  if (image_.size() != dom_.size()) {
    throw SizeError("DetMap: image size " + std::to_string(image_.size()) +
                    " for a domain of size " + std::to_string(dom_.size()));
  }
  for (std::size_t x = 0; x < image_.size(); ++x) {
    if (image_[x] >= cod_.size()) {
      throw SizeError("DetMap: image of '" + dom_.label(x) +
                      "' is out of range");
    }
  }
}

DetMap DetMap::identity(const FinSet& s) {
  std::vector<std::size_t> img(s.size());
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = i;
  return DetMap(s, s, std::move(img));
}

bool DetMap::surjective() const {
  std::vector<char> hit(cod_.size(), 0);
  for (std::size_t y : image_) hit[y] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

std::vector<std::vector<std::size_t>> DetMap::fibers() const {
  std::vector<std::vector<std::size_t>> f(cod_.size());
  for (std::size_t x = 0; x < image_.size(); ++x) f[image_[x]].push_back(x);
  return f;
}

DetMap compose(const DetMap& g, const DetMap& f) {
  if (f.cod() != g.dom()) {
    throw SpaceMismatch("compose(DetMap): middle spaces differ");
  }
  std::vector<std::size_t> img(f.dom().size());
  for (std::size_t x = 0; x < img.size(); ++x) img[x] = g(f(x));
  return DetMap(f.dom(), g.cod(), std::move(img));
}

Channel::Channel(FinSet dom, FinSet cod, std::vector<double> entries)
    : dom_(std::move(dom)), cod_(std::move(cod)), entries_(std::move(entries)) {
  if (entries_.size() != dom_.size() * cod_.size()) {
    throw SizeError("Channel: entry count does not match |dom| * |cod|");
  }
  for (std::size_t x = 0; x < dom_.size(); ++x) {
    detail::validate_mass(entries_, x * cod_.size(), cod_.size(),
                          "Channel row");
  }
}

Channel Channel::identity(const FinSet& s) {
  std::vector<double> e(s.size() * s.size(), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) e[i * s.size() + i] = 1.0;
  return Channel(s, s, std::move(e));
}

Dist Channel::row_dist(std::size_t x) const {
  auto r = row(x);
  return Dist(cod_, std::vector<double>(r.begin(), r.end()));
}

double max_abs_diff(const Channel& a, const Channel& b) {
  if (a.dom() != b.dom() || a.cod() != b.cod()) {
    throw SpaceMismatch("max_abs_diff: channels with different shapes");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    m = std::max(m, std::fabs(a.entries()[i] - b.entries()[i]));
  }
  return m;
}

}  // namespace finstat
