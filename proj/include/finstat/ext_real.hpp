#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace finstat {

// A value in [0, +inf]. Entropies live here: infinity is an exact,
// distinguished value (IEEE +inf), never a large finite stand-in.
class ExtReal {
 public:
  ExtReal() = default;

  // Implicit on purpose; sums like `re(m) + ExtReal(0.0)` stay readable.
  ExtReal(double v) : v_(v) {
    if (std::isnan(v) || v < 0.0) {
      throw std::domain_error("ExtReal: value must lie in [0, +inf]");
    }
  }

  static ExtReal infinity() {
    return ExtReal(std::numeric_limits<double>::infinity());
  }

  bool finite() const { return std::isfinite(v_); }

  // Returns +inf for the infinite value.
  double value() const { return v_; }

  ExtReal& operator+=(ExtReal o) {
    v_ += o.v_;  // inf absorbs; no inf - inf exists in [0, inf]
    return *this;
  }
  friend ExtReal operator+(ExtReal a, ExtReal b) { return a += b; }

  friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend bool operator!=(ExtReal a, ExtReal b) { return a.v_ != b.v_; }
  friend bool operator<(ExtReal a, ExtReal b) { return a.v_ < b.v_; }
  friend bool operator<=(ExtReal a, ExtReal b) { return a.v_ <= b.v_; }
  friend bool operator>(ExtReal a, ExtReal b) { return a.v_ > b.v_; }
  friend bool operator>=(ExtReal a, ExtReal b) { return a.v_ >= b.v_; }

 private:
  double v_ = 0.0;
};

// w * v under the 0 * inf = 0 convention used by every weighted entropy sum.
inline ExtReal weighted(double w, ExtReal v) {
  if (std::isnan(w) || w < 0.0) {
    throw std::domain_error("weighted: weight must be nonnegative");
  }
  if (w == 0.0) return ExtReal(0.0);
  return ExtReal(w * v.value());
}

// Extended-real comparison: two infinities agree, an infinity never agrees
// with a finite value, finite values compare with absolute tolerance.
inline bool ext_close(ExtReal a, ExtReal b, double tol) {
  if (!a.finite() || !b.finite()) return a.finite() == b.finite();
  return std::fabs(a.value() - b.value()) <= tol;
}

// Violation measure matching ext_close: 0 when both infinite, +inf when one
// side is, |a-b| otherwise.
inline ExtReal ext_violation(ExtReal a, ExtReal b) {
  if (!a.finite() && !b.finite()) return ExtReal(0.0);
  if (!a.finite() || !b.finite()) return ExtReal::infinity();
  return ExtReal(std::fabs(a.value() - b.value()));
}

}  // namespace finstat
