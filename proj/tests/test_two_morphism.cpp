#include <doctest.h>

#include <cmath>
#include <numbers>

#include "finstat/errors.hpp"
#include "finstat/two_morphism.hpp"

using namespace finstat;

namespace {

const FinSet X({"a"});
const FinSet Y({"u", "v"});
const FinSet Xp({"x"});
const FinSet Yp({"w"});

// Square with a singleton domain column: top row (t0, t1) against the
// coarse reconstruction through a one-point bottom row. Its conditional
// entropy is D((t0,t1) || cod section row), computable by hand.
TwoMorphism needle(double top0, double sec0) {
  StatMorphism dom = StatMorphism::make(DetMap(X, Xp, {0}), Dist(X, {1.0}),
                                        Channel(Xp, X, {1.0}));
  Channel top(X, Y, {top0, 1.0 - top0});
  Dist q = apply(top, Dist(X, {1.0}));
  StatMorphism cod = StatMorphism::make(DetMap(Y, Yp, {0, 0}), q,
                                        Channel(Yp, Y, {sec0, 1.0 - sec0}));
  return TwoMorphism::make(dom, cod, top, Channel(Xp, Yp, {1.0}));
}

}  // namespace

TEST_CASE("conditional entropy of the needle square is log 2") {
  TwoMorphism sq = needle(1.0, 0.5);
  CHECK(conditional_re(sq).value() ==
        doctest::Approx(std::numbers::ln2).epsilon(1e-15));
  CHECK(conditional_re_closed_form(sq).value() ==
        doctest::Approx(std::numbers::ln2).epsilon(1e-15));
  // Domain leg is an isomorphism, so the square entropy is the same.
  CHECK(ext_close(relative_entropy(sq), conditional_re(sq), 1e-15));
  CHECK(reconstruction(sq) == Channel(X, Y, {0.5, 0.5}));
  CHECK(!is_optimal(sq));
}

TEST_CASE("both conditional entropy routes agree, including at infinity") {
  TwoMorphism finite = needle(0.25, 0.6);
  CHECK(ext_close(conditional_re(finite), conditional_re_closed_form(finite),
                  1e-12));
  TwoMorphism blocked = needle(0.0, 1.0);  // top mass hits a zero of t
  CHECK(!conditional_re(blocked).finite());
  CHECK(!conditional_re_closed_form(blocked).finite());
  CHECK(!relative_entropy(blocked).finite());
}

TEST_CASE("make rejects each broken commuting condition") {
  StatMorphism dom = StatMorphism::make(DetMap(X, Xp, {0}), Dist(X, {1.0}),
                                        Channel(Xp, X, {1.0}));
  Channel top(X, Y, {1.0, 0.0});
  Channel bottom(Xp, Yp, {1.0});

  SUBCASE("top does not push the prior to the cod prior") {
    StatMorphism cod = StatMorphism::make(
        DetMap(Y, Yp, {0, 0}), Dist(Y, {0.5, 0.5}), Channel(Yp, Y, {0.5, 0.5}));
    CHECK_THROWS_AS(TwoMorphism::make(dom, cod, top, bottom),
                    SquareDoesNotCommute);
  }

  SUBCASE("channels do not commute with the vertical maps") {
    // Two-point X with a collapse on the left, identity on the right: the
    // bottom row cannot reproduce two distinct top rows.
    FinSet X2({"a", "b"});
    FinSet Yp2({"w", "z"});
    StatMorphism dom2 = StatMorphism::make(
        DetMap(X2, Xp, {0, 0}), Dist(X2, {0.5, 0.5}),
        Channel(Xp, X2, {0.5, 0.5}));
    Channel top2(X2, Y, {1.0, 0.0, 0.0, 1.0});
    StatMorphism cod2 = StatMorphism::make(
        DetMap(Y, Yp2, {0, 1}), Dist(Y, {0.5, 0.5}),
        Channel(Yp2, Y, {1.0, 0.0, 0.0, 1.0}));
    CHECK_THROWS_AS(TwoMorphism::make(dom2, cod2, top2,
                                      Channel(Xp, Yp2, {0.5, 0.5})),
                    SquareDoesNotCommute);
  }

  SUBCASE("channels that do not even fit the legs") {
    StatMorphism cod = StatMorphism::make(
        DetMap(Y, Yp, {0, 0}), Dist(Y, {1.0, 0.0}), Channel(Yp, Y, {0.5, 0.5}));
    CHECK_THROWS_AS(TwoMorphism::make(dom, cod, Channel(Y, Y, {1, 0, 0, 1}),
                                      bottom),
                    SpaceMismatch);
    CHECK_THROWS_AS(TwoMorphism::make(dom, cod, top, Channel(Yp, Xp, {1.0})),
                    SpaceMismatch);
  }
}

TEST_CASE("a square whose top is its own reconstruction is optimal") {
  FinSet X2({"a", "b"});
  StatMorphism dom = StatMorphism::make(DetMap(X2, Xp, {0, 0}),
                                        Dist(X2, {0.5, 0.5}),
                                        Channel(Xp, X2, {0.5, 0.5}));
  Channel t(Yp, Y, {0.3, 0.7});
  Channel bottom(Xp, Yp, {1.0});
  Channel top(X2, Y, {0.3, 0.7, 0.3, 0.7});  // = t ∘ bottom ∘ collapse
  StatMorphism cod = StatMorphism::make(DetMap(Y, Yp, {0, 0}),
                                        apply(top, dom.prior()), t);
  TwoMorphism sq = TwoMorphism::make(dom, cod, top, bottom);
  CHECK(reconstruction(sq) == top);
  CHECK(conditional_re(sq) == ExtReal(0.0));
  CHECK(is_optimal(sq));
  CHECK(relative_entropy(sq) == ExtReal(0.0));  // dom is optimal too
}

TEST_CASE("joint_marginal_check accepts true squares and flags loose ones") {
  TwoMorphism sq = needle(0.75, 0.4);
  JointMarginalReport rep = joint_marginal_check(sq);
  CHECK(rep.ok);
  CHECK(rep.max_violation <= 1e-15);

  // Admit a square whose bottom row is off the true marginal through a huge
  // tolerance, then measure it. (The check aggregates over fibers, so only a
  // wrong aggregate registers, not every channel-level disagreement.)
  FinSet X2({"a", "b"});
  FinSet Yp2({"w", "z"});
  StatMorphism dom2 = StatMorphism::make(DetMap(X2, Xp, {0, 0}),
                                         Dist(X2, {0.5, 0.5}),
                                         Channel(Xp, X2, {0.5, 0.5}));
  Channel top2(X2, Y, {1.0, 0.0, 0.0, 1.0});
  StatMorphism cod2 = StatMorphism::make(
      DetMap(Y, Yp2, {0, 1}), Dist(Y, {0.5, 0.5}),
      Channel(Yp2, Y, {1.0, 0.0, 0.0, 1.0}));
  TwoMorphism loose = TwoMorphism::make(dom2, cod2, top2,
                                        Channel(Xp, Yp2, {0.9, 0.1}), 1.0);
  JointMarginalReport bad = joint_marginal_check(loose);
  CHECK(!bad.ok);
  CHECK(bad.max_violation > 0.1);
}

TEST_CASE("vertical composition stacks squares and adds entropies") {
  // Upper: identity-shaped verticals over a genuinely noisy top.
  FinSet X2({"a", "b"});
  FinSet Y2({"u", "v"});
  FinSet Xp2({"c", "d"});
  FinSet Yp2({"w", "z"});
  FinSet Xpp({"e"});
  FinSet Ypp({"o"});

  Channel flow(X2, Y2, {0.7, 0.3, 0.2, 0.8});
  Dist p(X2, {0.5, 0.5});
  Dist q = apply(flow, p);

  StatMorphism up_dom = StatMorphism::make(
      DetMap(X2, Xp2, {0, 1}), p, Channel(Xp2, X2, {1.0, 0.0, 0.0, 1.0}));
  StatMorphism up_cod = StatMorphism::make(
      DetMap(Y2, Yp2, {0, 1}), q, Channel(Yp2, Y2, {1.0, 0.0, 0.0, 1.0}));
  Channel flow_p(Xp2, Yp2, flow.entries());
  TwoMorphism upper = TwoMorphism::make(up_dom, up_cod, flow, flow_p);

  StatMorphism lo_dom = StatMorphism::make(
      DetMap(Xp2, Xpp, {0, 0}), up_dom.pushforward(),
      bayes_inverse(DetMap(Xp2, Xpp, {0, 0}), up_dom.pushforward()));
  Dist qp = apply(flow_p, lo_dom.prior());
  StatMorphism lo_cod = StatMorphism::make(
      DetMap(Yp2, Ypp, {0, 0}), qp,
      Channel(Ypp, Yp2, {0.5, 0.5}));
  TwoMorphism lower = TwoMorphism::make(lo_dom, lo_cod, flow_p,
                                        Channel(Xpp, Ypp, {1.0}));

  TwoMorphism tall = vertical_compose(lower, upper);
  CHECK(tall.top() == upper.top());
  CHECK(tall.bottom() == lower.bottom());
  CHECK(ext_close(conditional_re(tall),
                  conditional_re(upper) + conditional_re(lower), 1e-12));
  CHECK(ext_close(relative_entropy(tall),
                  relative_entropy(upper) + relative_entropy(lower), 1e-12));

  // A lower square living on the same spaces but with a different top does
  // not glue.
  Channel other_top(Xp2, Yp2, {0.3, 0.7, 0.3, 0.7});
  StatMorphism lo_cod2 = StatMorphism::make(
      DetMap(Yp2, Ypp, {0, 0}), apply(other_top, lo_dom.prior()),
      Channel(Ypp, Yp2, {0.5, 0.5}));
  TwoMorphism mismatched = TwoMorphism::make(lo_dom, lo_cod2, other_top,
                                             Channel(Xpp, Ypp, {1.0}));
  CHECK_THROWS_AS(vertical_compose(mismatched, upper), GlueMismatch);
}

TEST_CASE("infinite conditional entropy survives stacking on both sides") {
  TwoMorphism upper = needle(0.0, 1.0);  // CE = inf
  StatMorphism lo_dom = StatMorphism::make(
      DetMap(Xp, FinSet({"e"}), {0}), Dist(Xp, {1.0}),
      Channel(FinSet({"e"}), Xp, {1.0}));
  StatMorphism lo_cod = StatMorphism::make(
      DetMap(Yp, FinSet({"o"}), {0}), Dist(Yp, {1.0}),
      Channel(FinSet({"o"}), Yp, {1.0}));
  TwoMorphism lower = TwoMorphism::make(lo_dom, lo_cod, Channel(Xp, Yp, {1.0}),
                                        Channel(FinSet({"e"}), FinSet({"o"}),
                                                {1.0}));
  TwoMorphism tall = vertical_compose(lower, upper);
  ExtReal sum = conditional_re(upper) + conditional_re(lower);
  CHECK(!conditional_re(tall).finite());
  CHECK(ext_violation(conditional_re(tall), sum) == ExtReal(0.0));
}

TEST_CASE("horizontal composition pastes along a shared boundary") {
  TwoMorphism left = needle(1.0, 0.5);
  FinSet W({"m", "n"});
  FinSet Wp({"k"});
  Channel rtop(Y, W, {1.0, 0.0, 0.0, 1.0});
  Dist rq = apply(rtop, left.cod().prior());
  StatMorphism rcod = StatMorphism::make(DetMap(W, Wp, {0, 0}), rq,
                                         Channel(Wp, W, {0.5, 0.5}));
  TwoMorphism right = TwoMorphism::make(left.cod(), rcod, rtop,
                                        Channel(Yp, Wp, {1.0}));
  TwoMorphism wide = horizontal_compose(right, left);
  CHECK(wide.top() == compose(right.top(), left.top()));
  CHECK(wide.bottom() == compose(right.bottom(), left.bottom()));
  CHECK(wide.dom().prior() == left.dom().prior());
  CHECK(wide.cod().prior() == right.cod().prior());

  // Same spaces, different boundary numbers: refuse to paste.
  StatMorphism other_mid = StatMorphism::make(
      DetMap(Y, Yp, {0, 0}), Dist(Y, {0.25, 0.75}),
      Channel(Yp, Y, {0.25, 0.75}));
  Channel rtop2(Y, W, {1.0, 0.0, 0.0, 1.0});
  Dist rq2 = apply(rtop2, other_mid.prior());
  StatMorphism rcod2 = StatMorphism::make(DetMap(W, Wp, {0, 0}), rq2,
                                          Channel(Wp, W, {0.5, 0.5}));
  TwoMorphism right2 = TwoMorphism::make(other_mid, rcod2, rtop2,
                                         Channel(Yp, Wp, {1.0}));
  CHECK_THROWS_AS(horizontal_compose(right2, left), GlueMismatch);
}

TEST_CASE("convex combination of squares mixes conditional entropy") {
  FinSet base({"l", "r"});
  TwoMorphism s1 = needle(1.0, 0.5);   // CE = log 2
  TwoMorphism s2 = needle(0.25, 0.25);  // CE = 0: top equals reconstruction

  SUBCASE("point mass reproduces a component exactly") {
    TwoMorphism c = convex_combine(Dist(base, {1.0, 0.0}), {s1, s2});
    CHECK(conditional_re(c) == conditional_re(s1));
    CHECK(relative_entropy(c) == relative_entropy(s1));
  }

  SUBCASE("interior weights average") {
    TwoMorphism c = convex_combine(Dist(base, {0.5, 0.5}), {s1, s2});
    ExtReal expect = weighted(0.5, conditional_re(s1)) +
                     weighted(0.5, conditional_re(s2));
    CHECK(ext_close(conditional_re(c), expect, 1e-9));
  }

  SUBCASE("infinite component with weight zero is erased") {
    TwoMorphism blocked = needle(0.0, 1.0);
    TwoMorphism c = convex_combine(Dist(base, {0.5, 0.5}), {s1, blocked});
    CHECK(!conditional_re(c).finite());
    TwoMorphism c0 = convex_combine(Dist(base, {1.0, 0.0}), {s1, blocked});
    CHECK(conditional_re(c0) == conditional_re(s1));
  }
}
