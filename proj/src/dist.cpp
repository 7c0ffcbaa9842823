#include "finstat/dist.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "finstat/errors.hpp"
#include "internal.hpp"

namespace finstat {

namespace detail {

// Shared by Dist and Channel rows: clamp [-slack, 0) to exact zero, reject
// worse negatives, require total mass within slack of 1.
void validate_mass(std::vector<double>& v, std::size_t offset, std::size_t n,
                   const char* what) {
  double sum = 0.0;
  for (std::size_t i = offset; i < offset + n; ++i) {
    double& e = v[i];
    if (std::isnan(e) || e < -kStochasticTol) {
      throw NotStochastic(std::string(what) + ": entry " +
                          std::to_string(i - offset) + " is " +
                          std::to_string(e));
    }
    if (e < 0.0) e = 0.0;
    sum += e;
  }
  if (std::fabs(sum - 1.0) > kStochasticTol) {
    throw NotStochastic(std::string(what) + ": mass " + std::to_string(sum) +
                        " not within slack of 1");
  }
}

}  // namespace detail

Dist::Dist(FinSet space, std::vector<double> probs)
    : space_(std::move(space)), probs_(std::move(probs)) {
  if (probs_.size() != space_.size()) {
    throw SizeError("Dist: " + std::to_string(probs_.size()) +
                    " entries for a space of size " +
                    std::to_string(space_.size()));
  }
  detail::validate_mass(probs_, 0, probs_.size(), "Dist");
}

double max_abs_diff(const Dist& a, const Dist& b) {
  if (a.space() != b.space()) {
    throw SpaceMismatch("max_abs_diff: distributions on different spaces");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::fabs(a[i] - b[i]));
  }
  return m;
}

}  // namespace finstat
