#pragma once

#include <vector>

#include "finstat/prob_ops.hpp"

namespace finstat {

// A morphism of finite probability spaces (X, p) -> (Y, q): a surjection
// f : X -> Y carrying p to q, together with a stochastic section
// s : Y ⇝ X (f∘s = id). q and the retrodiction r = s∘f∘p are derived at
// construction; instances are immutable and always valid.
class StatMorphism {
 public:
  // Throws SpaceMismatch / NotSurjective / NotASection. tol bounds the
  // allowed deviation of f∘s from the identity.
  static StatMorphism make(DetMap f, Dist p, Channel s, double tol = kEqTol);

  const DetMap& map() const { return f_; }
  const Dist& prior() const { return p_; }
  const Channel& section() const { return s_; }
  const Dist& pushforward() const { return q_; }
  const Dist& retrodiction() const { return r_; }

 private:
  StatMorphism(DetMap f, Dist p, Channel s, Dist q, Dist r);

  DetMap f_;
  Dist p_;
  Channel s_;
  Dist q_;
  Dist r_;
};

// outer ∘ inner: (g, q, t) after (f, p, s) is (g∘f, p, s∘t). Throws
// SpaceMismatch when the middle spaces differ and PriorMismatch when the
// inner pushforward is farther than tol from the outer prior.
StatMorphism compose(const StatMorphism& outer, const StatMorphism& inner,
                     double tol = kEqTol);

// D(p || s∘f∘p): how much the section's reconstruction diverges from the
// prior it tries to recover.
ExtReal relative_entropy(const StatMorphism& m);

// True when s∘f∘p recovers p within tol, i.e. relative entropy vanishes.
bool is_optimal(const StatMorphism& m, double tol = kEqTol);

// The exact posterior s(x|y) = p(x)/q(y) on each fiber; rows over fibers of
// pushforward mass zero fall back to uniform. Always a section, and always
// optimal for (f, p).
Channel bayes_inverse(const DetMap& f, const Dist& p);

// Convex combination over a base distribution: one morphism per base
// element, glued on disjoint unions with labels "x:u". Component priors get
// weighted by the base; zero-weight components are carried along with zero
// mass. Throws EmptyFamily / SizeError.
StatMorphism convex_combine(const Dist& base,
                            const std::vector<StatMorphism>& family);

}  // namespace finstat
