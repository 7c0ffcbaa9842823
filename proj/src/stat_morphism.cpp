#include "finstat/stat_morphism.hpp"

#include <string>
#include <utility>

#include "finstat/errors.hpp"

namespace finstat {

StatMorphism::StatMorphism(DetMap f, Dist p, Channel s, Dist q, Dist r)
    : f_(std::move(f)),
      p_(std::move(p)),
      s_(std::move(s)),
      q_(std::move(q)),
      r_(std::move(r)) {}

StatMorphism StatMorphism::make(DetMap f, Dist p, Channel s, double tol) {
  if (p.space() != f.dom()) {
    throw SpaceMismatch("StatMorphism: prior lives on the wrong space");
  }
  if (s.dom() != f.cod() || s.cod() != f.dom()) {
    throw SpaceMismatch("StatMorphism: section must run cod(f) ⇝ dom(f)");
  }
  if (!f.surjective()) {
    throw NotSurjective("StatMorphism: map misses part of its codomain");
  }
  const double sv = section_violation(s, f);
  if (sv > tol) {
    throw NotASection("StatMorphism: f∘s differs from the identity by " +
                      std::to_string(sv));
  }
  Dist q = finstat::pushforward(f, p);
  Dist r = apply(s, q);
  return StatMorphism(std::move(f), std::move(p), std::move(s), std::move(q),
                      std::move(r));
}

StatMorphism compose(const StatMorphism& outer, const StatMorphism& inner,
                     double tol) {
  if (inner.map().cod() != outer.map().dom()) {
    throw SpaceMismatch("compose: middle spaces differ");
  }
  const double gap = max_abs_diff(inner.pushforward(), outer.prior());
  if (gap > tol) {
    throw PriorMismatch(
        "compose: inner pushforward differs from outer prior by " +
        std::to_string(gap));
  }
  return StatMorphism::make(compose(outer.map(), inner.map()), inner.prior(),
                            compose(inner.section(), outer.section()), tol);
}

ExtReal relative_entropy(const StatMorphism& m) {
  return kl(m.prior(), m.retrodiction());
}

bool is_optimal(const StatMorphism& m, double tol) {
  return max_abs_diff(m.prior(), m.retrodiction()) <= tol;
}

Channel bayes_inverse(const DetMap& f, const Dist& p) {
  if (f.dom() != p.space()) {
    throw SpaceMismatch("bayes_inverse: map domain differs from prior space");
  }
  const Dist q = pushforward(f, p);
  const auto fibers = f.fibers();
  const std::size_t nx = f.dom().size();
  std::vector<double> e(f.cod().size() * nx, 0.0);
  for (std::size_t y = 0; y < fibers.size(); ++y) {
    const auto& fiber = fibers[y];
    if (fiber.empty()) {
      throw NotSurjective("bayes_inverse: empty fiber over '" +
                          f.cod().label(y) + "'");
    }
    if (q[y] > 0.0) {
      for (std::size_t x : fiber) e[y * nx + x] = p[x] / q[y];
    } else {
      for (std::size_t x : fiber) {
        e[y * nx + x] = 1.0 / static_cast<double>(fiber.size());
      }
    }
  }
  return Channel(f.cod(), f.dom(), std::move(e));
}

StatMorphism convex_combine(const Dist& base,
                            const std::vector<StatMorphism>& family) {
  if (family.empty()) {
    throw EmptyFamily("convex_combine: empty family");
  }
  if (family.size() != base.size()) {
    throw SizeError("convex_combine: need one morphism per base element");
  }

  std::vector<FinSet> doms;
  std::vector<FinSet> cods;
  doms.reserve(family.size());
  cods.reserve(family.size());
  for (const auto& m : family) {
    doms.push_back(m.map().dom());
    cods.push_back(m.map().cod());
  }
  const FinSet u = disjoint_union(base.space(), doms);
  const FinSet v = disjoint_union(base.space(), cods);

  // Block offsets into the two unions.
  std::vector<std::size_t> uoff(family.size() + 1, 0);
  std::vector<std::size_t> voff(family.size() + 1, 0);
  for (std::size_t i = 0; i < family.size(); ++i) {
    uoff[i + 1] = uoff[i] + doms[i].size();
    voff[i + 1] = voff[i] + cods[i].size();
  }

  std::vector<std::size_t> img(u.size());
  std::vector<double> probs(u.size());
  std::vector<double> sect(v.size() * u.size(), 0.0);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& m = family[i];
    for (std::size_t x = 0; x < doms[i].size(); ++x) {
      img[uoff[i] + x] = voff[i] + m.map()(x);
      probs[uoff[i] + x] = base[i] * m.prior()[x];
    }
    for (std::size_t y = 0; y < cods[i].size(); ++y) {
      for (std::size_t x = 0; x < doms[i].size(); ++x) {
        sect[(voff[i] + y) * u.size() + (uoff[i] + x)] = m.section().at(y, x);
      }
    }
  }
  return StatMorphism::make(DetMap(u, v, std::move(img)),
                            Dist(u, std::move(probs)),
                            Channel(v, u, std::move(sect)));
}

}  // namespace finstat
