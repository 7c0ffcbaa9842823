#pragma once

#include <vector>

#include "finstat/stat_morphism.hpp"

namespace finstat {

// A commuting square between two morphisms of probability spaces:
//
//        top : X ⇝ Y
//   dom = (μ,p,s)   cod = (ν,q,t)      (vertical legs)
//        bottom : X' ⇝ Y'
//
// subject to  top∘p = q,  bottom∘p' = q',  ν∘top = bottom∘μ,
// where p' and q' are the pushforwards of the legs. Immutable, always valid.
class TwoMorphism {
 public:
  // Throws SpaceMismatch when the channels do not fit the legs, and
  // SquareDoesNotCommute naming the failed condition otherwise.
  static TwoMorphism make(StatMorphism dom, StatMorphism cod, Channel top,
                          Channel bottom, double tol = kEqTol);

  const StatMorphism& dom() const { return dom_; }
  const StatMorphism& cod() const { return cod_; }
  const Channel& top() const { return top_; }
  const Channel& bottom() const { return bottom_; }

 private:
  TwoMorphism(StatMorphism dom, StatMorphism cod, Channel top, Channel bottom);

  StatMorphism dom_;
  StatMorphism cod_;
  Channel top_;
  Channel bottom_;
};

// The comparison channel t∘bottom∘μ : X ⇝ Y that the square reconstructs
// the top channel with, built by two kernel products.
Channel reconstruction(const TwoMorphism& sq);

// Conditional relative entropy sum_x p(x) D(top_row(x) || recon_row(x)),
// definitional route: build the reconstruction, then weight row divergences
// (rows with p(x) = 0 contribute nothing, even when infinite).
ExtReal conditional_re(const TwoMorphism& sq);

// Same quantity as one flat sum
//   sum_{x,y} p(x) top(y|x) log( top(y|x) / (t(y|ν(y)) bottom(ν(y)|μ(x))) ),
// kept as an independent route for cross-checking.
ExtReal conditional_re_closed_form(const TwoMorphism& sq);

// relative_entropy(dom) + conditional_re: the entropy of the square.
ExtReal relative_entropy(const TwoMorphism& sq);

// True when the top row equals its reconstruction within tol for every x
// carrying prior mass above tol. Implies conditional_re is tiny.
bool is_optimal(const TwoMorphism& sq, double tol = kEqTol);

struct JointMarginalReport {
  bool ok = true;
  double max_violation = 0.0;
};

// Checks that the bottom joint distribution is the pushforward of the top
// joint under the pair of vertical maps:
//   p'(x') bottom(y'|x') = sum over the μ-fiber of x' and ν-fiber of y'
//                          of p(x) top(y|x).
JointMarginalReport joint_marginal_check(const TwoMorphism& sq,
                                         double tol = kEqTol);

// Stacks `lower` under `upper`: legs compose, the channels glue along
// upper.bottom == lower.top (within tol, else GlueMismatch). Result runs
// from upper's top row to lower's bottom row.
TwoMorphism vertical_compose(const TwoMorphism& lower, const TwoMorphism& upper,
                             double tol = kEqTol);

// Pastes `right` after `left` along left.cod == right.dom: channels compose,
// legs pass through. Mismatched shared data throws SpaceMismatch (structure)
// or GlueMismatch (numerics).
TwoMorphism horizontal_compose(const TwoMorphism& right, const TwoMorphism& left,
                               double tol = kEqTol);

// Convex combination over a base distribution, blockwise on disjoint unions;
// legs combine as morphisms, channels as block diagonals.
TwoMorphism convex_combine(const Dist& base,
                           const std::vector<TwoMorphism>& family);

}  // namespace finstat
