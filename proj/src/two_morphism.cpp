#include "finstat/two_morphism.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "finstat/errors.hpp"

namespace finstat {

TwoMorphism::TwoMorphism(StatMorphism dom, StatMorphism cod, Channel top,
                         Channel bottom)
    : dom_(std::move(dom)),
      cod_(std::move(cod)),
      top_(std::move(top)),
      bottom_(std::move(bottom)) {}

TwoMorphism TwoMorphism::make(StatMorphism dom, StatMorphism cod, Channel top,
                              Channel bottom, double tol) {
  if (top.dom() != dom.map().dom() || top.cod() != cod.map().dom()) {
    throw SpaceMismatch("TwoMorphism: top channel does not fit the legs");
  }
  if (bottom.dom() != dom.map().cod() || bottom.cod() != cod.map().cod()) {
    throw SpaceMismatch("TwoMorphism: bottom channel does not fit the legs");
  }

  const double v1 = max_abs_diff(apply(top, dom.prior()), cod.prior());
  if (v1 > tol) {
    throw SquareDoesNotCommute(
        "TwoMorphism: top∘p differs from q by " + std::to_string(v1));
  }
  const double v2 =
      max_abs_diff(apply(bottom, dom.pushforward()), cod.pushforward());
  if (v2 > tol) {
    throw SquareDoesNotCommute(
        "TwoMorphism: bottom∘p' differs from q' by " + std::to_string(v2));
  }
  const double v3 = max_abs_diff(compose(lift(cod.map()), top),
                                 compose(bottom, lift(dom.map())));
  if (v3 > tol) {
    throw SquareDoesNotCommute(
        "TwoMorphism: ν∘top differs from bottom∘μ by " + std::to_string(v3));
  }
  return TwoMorphism(std::move(dom), std::move(cod), std::move(top),
                     std::move(bottom));
}

Channel reconstruction(const TwoMorphism& sq) {
  return compose(compose(sq.cod().section(), sq.bottom()),
                 lift(sq.dom().map()));
}

ExtReal conditional_re(const TwoMorphism& sq) {
  return conditional_kl(sq.top(), reconstruction(sq), sq.dom().prior());
}

ExtReal conditional_re_closed_form(const TwoMorphism& sq) {
  const Dist& p = sq.dom().prior();
  const Channel& top = sq.top();
  const Channel& bottom = sq.bottom();
  const Channel& t = sq.cod().section();
  const DetMap& mu = sq.dom().map();
  const DetMap& nu = sq.cod().map();
  double acc = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] == 0.0) continue;
    for (std::size_t y = 0; y < top.cod().size(); ++y) {
      const double fyx = top.at(x, y);
      if (fyx == 0.0) continue;
      const double denom = t.at(nu(y), y) * bottom.at(mu(x), nu(y));
      if (denom == 0.0) return ExtReal::infinity();
      acc += p[x] * fyx * std::log(fyx / denom);
    }
  }
  return ExtReal(acc < 0.0 ? 0.0 : acc);
}

ExtReal relative_entropy(const TwoMorphism& sq) {
  return relative_entropy(sq.dom()) + conditional_re(sq);
}

bool is_optimal(const TwoMorphism& sq, double tol) {
  const Channel recon = reconstruction(sq);
  const Dist& p = sq.dom().prior();
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] <= tol) continue;
    for (std::size_t y = 0; y < recon.cod().size(); ++y) {
      if (std::fabs(sq.top().at(x, y) - recon.at(x, y)) > tol) return false;
    }
  }
  return true;
}

JointMarginalReport joint_marginal_check(const TwoMorphism& sq, double tol) {
  const Dist& p = sq.dom().prior();
  const Dist& pp = sq.dom().pushforward();
  const DetMap& mu = sq.dom().map();
  const DetMap& nu = sq.cod().map();
  const std::size_t nxp = pp.size();
  const std::size_t nyp = sq.bottom().cod().size();

  // Accumulate the top joint through (μ, ν), then compare.
  std::vector<double> acc(nxp * nyp, 0.0);
  for (std::size_t x = 0; x < p.size(); ++x) {
    for (std::size_t y = 0; y < sq.top().cod().size(); ++y) {
      acc[mu(x) * nyp + nu(y)] += p[x] * sq.top().at(x, y);
    }
  }
  JointMarginalReport rep;
  for (std::size_t xp = 0; xp < nxp; ++xp) {
    for (std::size_t yp = 0; yp < nyp; ++yp) {
      const double lhs = pp[xp] * sq.bottom().at(xp, yp);
      const double v = std::fabs(lhs - acc[xp * nyp + yp]);
      rep.max_violation = std::max(rep.max_violation, v);
    }
  }
  rep.ok = rep.max_violation <= tol;
  return rep;
}

TwoMorphism vertical_compose(const TwoMorphism& lower, const TwoMorphism& upper,
                             double tol) {
  if (lower.top().dom() != upper.bottom().dom() ||
      lower.top().cod() != upper.bottom().cod()) {
    throw SpaceMismatch("vertical_compose: middle rows live on different spaces");
  }
  const double gap = max_abs_diff(lower.top(), upper.bottom());
  if (gap > tol) {
    throw GlueMismatch(
        "vertical_compose: shared middle channel differs by " +
        std::to_string(gap));
  }
  // Leg composition enforces the prior gluing on both sides. Member data is
  // only tol-accurate, so the composite is validated at twice that.
  return TwoMorphism::make(compose(lower.dom(), upper.dom(), tol),
                           compose(lower.cod(), upper.cod(), tol), upper.top(),
                           lower.bottom(), 2 * tol);
}

TwoMorphism horizontal_compose(const TwoMorphism& right, const TwoMorphism& left,
                               double tol) {
  const StatMorphism& shared = left.cod();
  const StatMorphism& expect = right.dom();
  if (shared.map() != expect.map()) {
    throw SpaceMismatch(
        "horizontal_compose: shared vertical map differs between the squares");
  }
  const double pgap = max_abs_diff(shared.prior(), expect.prior());
  const double sgap = max_abs_diff(shared.section(), expect.section());
  if (std::max(pgap, sgap) > tol) {
    throw GlueMismatch("horizontal_compose: shared leg data differs by " +
                       std::to_string(std::max(pgap, sgap)));
  }
  return TwoMorphism::make(left.dom(), right.cod(),
                           compose(right.top(), left.top()),
                           compose(right.bottom(), left.bottom()), 2 * tol);
}

TwoMorphism convex_combine(const Dist& base,
                           const std::vector<TwoMorphism>& family) {
  if (family.empty()) {
    throw EmptyFamily("convex_combine: empty family");
  }
  if (family.size() != base.size()) {
    throw SizeError("convex_combine: need one square per base element");
  }

  std::vector<StatMorphism> doms;
  std::vector<StatMorphism> cods;
  doms.reserve(family.size());
  cods.reserve(family.size());
  for (const auto& sq : family) {
    doms.push_back(sq.dom());
    cods.push_back(sq.cod());
  }
  StatMorphism dom = convex_combine(base, doms);
  StatMorphism cod = convex_combine(base, cods);

  // Block-diagonal channels on the combined spaces; the unions enumerate
  // blocks in base order, matching convex_combine on the legs.
  const FinSet& u = dom.map().dom();
  const FinSet& vtop = cod.map().dom();
  const FinSet& up = dom.map().cod();
  const FinSet& vbot = cod.map().cod();
  std::vector<double> top(u.size() * vtop.size(), 0.0);
  std::vector<double> bottom(up.size() * vbot.size(), 0.0);
  std::size_t uo = 0, vo = 0, upo = 0, vbo = 0;
  for (const auto& sq : family) {
    const std::size_t nu = sq.top().dom().size();
    const std::size_t nv = sq.top().cod().size();
    for (std::size_t x = 0; x < nu; ++x) {
      for (std::size_t y = 0; y < nv; ++y) {
        top[(uo + x) * vtop.size() + (vo + y)] = sq.top().at(x, y);
      }
    }
    const std::size_t nup = sq.bottom().dom().size();
    const std::size_t nvp = sq.bottom().cod().size();
    for (std::size_t x = 0; x < nup; ++x) {
      for (std::size_t y = 0; y < nvp; ++y) {
        bottom[(upo + x) * vbot.size() + (vbo + y)] = sq.bottom().at(x, y);
      }
    }
    uo += nu;
    vo += nv;
    upo += nup;
    vbo += nvp;
  }
  return TwoMorphism::make(std::move(dom), std::move(cod),
                           Channel(u, vtop, std::move(top)),
                           Channel(up, vbot, std::move(bottom)));
}

}  // namespace finstat
