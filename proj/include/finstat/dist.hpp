#pragma once

#include <vector>

#include "finstat/fin_set.hpp"

namespace finstat {

// Validation slack for probability data: tiny negatives are clamped, masses
// and row sums must land within this of 1.
inline constexpr double kStochasticTol = 1e-9;

// Default tolerance for derived-data equalities (sections, priors, squares).
inline constexpr double kEqTol = 1e-9;

// Probability distribution on a FinSet, indexed by label order.
// Entries in [-kStochasticTol, 0) are clamped to exact zero at construction;
// anything lower, or a total mass off by more than kStochasticTol, throws
// NotStochastic. Stored values are otherwise kept as given.
class Dist {
 public:
  Dist(FinSet space, std::vector<double> probs);

  const FinSet& space() const { return space_; }
  const std::vector<double>& probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::size_t size() const { return probs_.size(); }

  friend bool operator==(const Dist& a, const Dist& b) {
    return a.space_ == b.space_ && a.probs_ == b.probs_;
  }

 private:
  FinSet space_;
  std::vector<double> probs_;
};

// Largest entrywise difference; throws SpaceMismatch on different spaces.
double max_abs_diff(const Dist& a, const Dist& b);

}  // namespace finstat
