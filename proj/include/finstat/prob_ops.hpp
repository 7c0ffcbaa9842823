#pragma once

#include "finstat/channel.hpp"
#include "finstat/dist.hpp"
#include "finstat/ext_real.hpp"

namespace finstat {

enum class LogBase { natural, two };

// Kernel product (g∘f)(z|x) = sum_y g(z|y) f(y|x).
// Throws SpaceMismatch unless f.cod == g.dom.
Channel compose(const Channel& g, const Channel& f);

// Point-mass channel of a function.
Channel lift(const DetMap& f);

// Inverse of lift; throws NotPure when some row is farther than tol from
// every point mass.
DetMap as_det(const Channel& f, double tol = kEqTol);

bool is_pure(const Channel& f, double tol = kEqTol);

// Output distribution sum_x f(y|x) p(x).
Dist apply(const Channel& f, const Dist& p);

// apply(lift(f), p) without building the matrix.
Dist pushforward(const DetMap& f, const Dist& p);

// Max entry of |f∘s - id| on cod(f); mass outside a fiber shows up here
// as off-diagonal weight. Requires s : cod(f) ⇝ dom(f).
double section_violation(const Channel& s, const DetMap& f);

bool is_section(const Channel& s, const DetMap& f, double tol = kEqTol);

// Joint distribution on product(p.space, f.cod): prob(x⊗y) = p(x) f(y|x).
Dist joint(const Channel& f, const Dist& p);

// Relative entropy sum_x p(x) log(p(x)/q(x)) in [0, +inf].
// Terms with p(x) = 0 contribute nothing; p(x) > 0 with q(x) = 0 gives
// infinity. Tiny negative rounding of the sum is clamped to 0.
ExtReal kl(const Dist& p, const Dist& q, LogBase base = LogBase::natural);

// sum_x p(x) D(f_row(x) || g_row(x)) with 0 * inf = 0: rows at p(x) = 0 are
// skipped even when their divergence is infinite.
ExtReal conditional_kl(const Channel& f, const Channel& g, const Dist& p,
                       LogBase base = LogBase::natural);

// Fast path equal to compose(g, lift(f)): row x of the result is row f(x)
// of g, copied. No sums, so agreement with the generic route is exact.
Channel compose_pure_fast(const Channel& g, const DetMap& f);

// Fast path equal to compose(g, f) when g is a stochastic section of the
// function h (rows of g put mass only on h-fibers, checked within tol):
// the kernel sum collapses to (g∘f)(z|x) = g(z|h(z)) f(h(z)|x).
Channel compose_section_fast(const Channel& g, const DetMap& h,
                             const Channel& f, double tol = kEqTol);

}  // namespace finstat
