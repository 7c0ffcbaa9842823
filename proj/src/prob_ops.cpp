#include "finstat/prob_ops.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "finstat/errors.hpp"

namespace finstat {

namespace {

// Row-level relative entropy in nats; +inf signalled through the return.
double kl_span(std::span<const double> p, std::span<const double> q) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;  // 0 log(0/q) = 0, including q = 0
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    acc += p[i] * std::log(p[i] / q[i]);
  }
  // The true value is nonnegative; anything below is rounding.
  return acc < 0.0 ? 0.0 : acc;
}

double in_base(double nats, LogBase base) {
  return base == LogBase::natural ? nats : nats / std::numbers::ln2;
}

}  // namespace

Channel compose(const Channel& g, const Channel& f) {
  if (f.cod() != g.dom()) {
    throw SpaceMismatch("compose(Channel): middle spaces differ");
  }
  const std::size_t nx = f.dom().size();
  const std::size_t ny = f.cod().size();
  const std::size_t nz = g.cod().size();
  std::vector<double> e(nx * nz, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      const double fyx = f.at(x, y);
      if (fyx == 0.0) continue;
      for (std::size_t z = 0; z < nz; ++z) {
        e[x * nz + z] += g.at(y, z) * fyx;
      }
    }
  }
  return Channel(f.dom(), g.cod(), std::move(e));
}

Channel lift(const DetMap& f) {
  const std::size_t ny = f.cod().size();
  std::vector<double> e(f.dom().size() * ny, 0.0);
  for (std::size_t x = 0; x < f.dom().size(); ++x) e[x * ny + f(x)] = 1.0;
  return Channel(f.dom(), f.cod(), std::move(e));
}

bool is_pure(const Channel& f, double tol) {
  for (std::size_t x = 0; x < f.dom().size(); ++x) {
    bool found = false;
    for (std::size_t y = 0; y < f.cod().size(); ++y) {
      if (std::fabs(f.at(x, y) - 1.0) <= tol) {
        found = true;
      } else if (f.at(x, y) > tol) {
        return false;
      }
    }
    if (!found) return false;
  }
  return true;
}

DetMap as_det(const Channel& f, double tol) {
  std::vector<std::size_t> img(f.dom().size());
  for (std::size_t x = 0; x < f.dom().size(); ++x) {
    bool found = false;
    for (std::size_t y = 0; y < f.cod().size(); ++y) {
      if (std::fabs(f.at(x, y) - 1.0) <= tol) {
        img[x] = y;
        found = true;
      } else if (f.at(x, y) > tol) {
        found = false;
        break;
      }
    }
    if (!found) {
      throw NotPure("as_det: row '" + f.dom().label(x) +
                    "' is not a point mass");
    }
  }
  return DetMap(f.dom(), f.cod(), std::move(img));
}

Dist apply(const Channel& f, const Dist& p) {
  if (f.dom() != p.space()) {
    throw SpaceMismatch("apply: channel domain differs from distribution space");
  }
  std::vector<double> out(f.cod().size(), 0.0);
  for (std::size_t x = 0; x < p.size(); ++x) {
    const double px = p[x];
    if (px == 0.0) continue;
    for (std::size_t y = 0; y < out.size(); ++y) {
      out[y] += f.at(x, y) * px;
    }
  }
  return Dist(f.cod(), std::move(out));
}

Dist pushforward(const DetMap& f, const Dist& p) {
  if (f.dom() != p.space()) {
    throw SpaceMismatch("pushforward: map domain differs from distribution space");
  }
  std::vector<double> out(f.cod().size(), 0.0);
  for (std::size_t x = 0; x < p.size(); ++x) out[f(x)] += p[x];
  return Dist(f.cod(), std::move(out));
}

double section_violation(const Channel& s, const DetMap& f) {
  if (s.dom() != f.cod() || s.cod() != f.dom()) {
    throw SpaceMismatch("section_violation: s must run cod(f) ⇝ dom(f)");
  }
  const std::size_t ny = f.cod().size();
  double worst = 0.0;
  for (std::size_t y = 0; y < ny; ++y) {
    // Row y of f∘s, accumulated fiberwise.
    std::vector<double> row(ny, 0.0);
    for (std::size_t x = 0; x < f.dom().size(); ++x) {
      row[f(x)] += s.at(y, x);
    }
    for (std::size_t yy = 0; yy < ny; ++yy) {
      const double want = yy == y ? 1.0 : 0.0;
      worst = std::max(worst, std::fabs(row[yy] - want));
    }
  }
  return worst;
}

bool is_section(const Channel& s, const DetMap& f, double tol) {
  return section_violation(s, f) <= tol;
}

Dist joint(const Channel& f, const Dist& p) {
  if (f.dom() != p.space()) {
    throw SpaceMismatch("joint: channel domain differs from distribution space");
  }
  const std::size_t ny = f.cod().size();
  std::vector<double> out(p.size() * ny);
  for (std::size_t x = 0; x < p.size(); ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      out[x * ny + y] = p[x] * f.at(x, y);
    }
  }
  return Dist(product(p.space(), f.cod()), std::move(out));
}

ExtReal kl(const Dist& p, const Dist& q, LogBase base) {
  if (p.space() != q.space()) {
    throw SpaceMismatch("kl: distributions on different spaces");
  }
  const double nats = kl_span(p.probs(), q.probs());
  if (!std::isfinite(nats)) return ExtReal::infinity();
  return ExtReal(in_base(nats, base));
}

ExtReal conditional_kl(const Channel& f, const Channel& g, const Dist& p,
                       LogBase base) {
  if (f.dom() != g.dom() || f.cod() != g.cod()) {
    throw SpaceMismatch("conditional_kl: channels with different shapes");
  }
  if (f.dom() != p.space()) {
    throw SpaceMismatch("conditional_kl: weight space differs from domain");
  }
  double acc = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    const double px = p[x];
    if (px == 0.0) continue;  // 0 * inf = 0
    const double term = kl_span(f.row(x), g.row(x));
    if (!std::isfinite(term)) return ExtReal::infinity();
    acc += px * term;
  }
  return ExtReal(in_base(acc, base));
}

Channel compose_pure_fast(const Channel& g, const DetMap& f) {
  if (f.cod() != g.dom()) {
    throw SpaceMismatch("compose_pure_fast: middle spaces differ");
  }
  const std::size_t nz = g.cod().size();
  std::vector<double> e(f.dom().size() * nz);
  for (std::size_t x = 0; x < f.dom().size(); ++x) {
    auto src = g.row(f(x));
    std::copy(src.begin(), src.end(), e.begin() + x * nz);
  }
  return Channel(f.dom(), g.cod(), std::move(e));
}

Channel compose_section_fast(const Channel& g, const DetMap& h,
                             const Channel& f, double tol) {
  if (f.cod() != g.dom()) {
    throw SpaceMismatch("compose_section_fast: middle spaces differ");
  }
  if (!is_section(g, h, tol)) {
    throw NotASection("compose_section_fast: g is not a section of h");
  }
  const std::size_t nx = f.dom().size();
  const std::size_t nz = g.cod().size();
  std::vector<double> e(nx * nz);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t z = 0; z < nz; ++z) {
      e[x * nz + z] = g.at(h(z), z) * f.at(x, h(z));
    }
  }
  return Channel(f.dom(), g.cod(), std::move(e));
}

}  // namespace finstat
