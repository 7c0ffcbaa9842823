#include <doctest.h>

#include <cmath>
#include <numbers>

#include "finstat/errors.hpp"
#include "finstat/stat_morphism.hpp"

using namespace finstat;

namespace {

const FinSet X({"a", "b"});
const FinSet Y({"u"});
const FinSet Z({"u", "v"});

// Collapse-to-a-point morphism with prior p and section row s0, s1.
StatMorphism collapse(double p0, double s0) {
  return StatMorphism::make(DetMap(X, Y, {0, 0}), Dist(X, {p0, 1.0 - p0}),
                            Channel(Y, X, {s0, 1.0 - s0}));
}

}  // namespace

TEST_CASE("make validates its pieces") {
  DetMap f(X, Y, {0, 0});
  Dist p(X, {0.5, 0.5});
  Channel s(Y, X, {0.5, 0.5});
  CHECK_NOTHROW(StatMorphism::make(f, p, s));
  CHECK_THROWS_AS(StatMorphism::make(f, Dist(Z, {0.5, 0.5}), s),
                  SpaceMismatch);
  CHECK_THROWS_AS(StatMorphism::make(f, p, Channel(Y, Y, {1.0})),
                  SpaceMismatch);
  CHECK_THROWS_AS(
      StatMorphism::make(DetMap(X, Z, {0, 0}), p, Channel(Z, X, {1, 0, 0, 1})),
      NotSurjective);
  // Section condition f∘s = id fails when a row leaves its fiber: with
  // f bijective, s must be the identity matrix.
  DetMap bij(X, Z, {0, 1});
  CHECK_THROWS_AS(
      StatMorphism::make(bij, p, Channel(Z, X, {0.9, 0.1, 0.0, 1.0})),
      NotASection);
}

TEST_CASE("derived data and relative entropy on the collapse example") {
  StatMorphism m = collapse(0.75, 0.5);
  CHECK(m.pushforward() == Dist(Y, {1.0}));
  CHECK(m.retrodiction() == Dist(X, {0.5, 0.5}));
  CHECK(relative_entropy(m).value() ==
        doctest::Approx(0.130812035941137).epsilon(1e-12));
  CHECK(!is_optimal(m));

  // Section that already matches the prior: entropy is exactly zero.
  StatMorphism best = collapse(0.75, 0.75);
  CHECK(relative_entropy(best) == ExtReal(0.0));
  CHECK(is_optimal(best));

  // Section missing half the support: prior mass lands where the
  // retrodiction has none.
  StatMorphism bad = collapse(0.75, 1.0);
  CHECK(!relative_entropy(bad).finite());
}

TEST_CASE("composition composes pieces and needs matching priors") {
  // X --id--> X --collapse--> Y with uniform prior.
  StatMorphism inner = StatMorphism::make(DetMap::identity(X),
                                          Dist(X, {0.25, 0.75}),
                                          Channel::identity(X));
  StatMorphism outer = collapse(0.25, 0.3);
  StatMorphism c = compose(outer, inner);
  CHECK(c.map() == DetMap(X, Y, {0, 0}));
  CHECK(c.prior() == inner.prior());
  // Section of the composite is inner.section ∘ outer.section.
  CHECK(c.section() == compose(inner.section(), outer.section()));

  StatMorphism wrong_prior = collapse(0.5, 0.3);
  CHECK_THROWS_AS(compose(wrong_prior, inner), PriorMismatch);

  StatMorphism z_inner = StatMorphism::make(
      DetMap::identity(Z), Dist(Z, {0.5, 0.5}), Channel::identity(Z));
  CHECK_THROWS_AS(compose(outer, z_inner), SpaceMismatch);
}

TEST_CASE("relative entropy adds along composition") {
  StatMorphism inner = StatMorphism::make(
      DetMap(Z, Z, {0, 1}), Dist(Z, {0.25, 0.75}),
      Channel(Z, Z, {1.0, 0.0, 0.0, 1.0}));  // identity-shaped, entropy 0
  StatMorphism outer = StatMorphism::make(
      DetMap(Z, Y, {0, 0}), inner.pushforward(), Channel(Y, Z, {0.5, 0.5}));
  ExtReal total = relative_entropy(compose(outer, inner));
  ExtReal parts = relative_entropy(outer) + relative_entropy(inner);
  CHECK(ext_close(total, parts, 1e-12));
}

TEST_CASE("bayes_inverse is the posterior and is optimal") {
  DetMap f(X, Y, {0, 0});
  Dist p(X, {0.25, 0.75});
  Channel s = bayes_inverse(f, p);
  CHECK(s.at(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(s.at(0, 1) == doctest::Approx(0.75).epsilon(1e-15));
  StatMorphism m = StatMorphism::make(f, p, s);
  CHECK(relative_entropy(m).value() <= 1e-15);
  CHECK(is_optimal(m));

  // Fiber with zero pushforward mass falls back to uniform.
  FinSet W({"a", "b", "c"});
  DetMap g(W, Z, {0, 0, 1});
  Channel t = bayes_inverse(g, Dist(W, {0.5, 0.5, 0.0}));
  CHECK(t.at(1, 2) == 1.0);  // fiber of v is {c}; uniform there is the point
  CHECK(t.at(0, 0) == doctest::Approx(0.5));
  CHECK(is_section(t, g));
}

TEST_CASE("convex_combine glues on the disjoint union") {
  FinSet base({"l", "r"});
  StatMorphism m1 = collapse(0.75, 0.5);
  StatMorphism m2 = collapse(0.25, 0.25);

  SUBCASE("point mass on one component reproduces it exactly") {
    StatMorphism c = convex_combine(Dist(base, {1.0, 0.0}), {m1, m2});
    CHECK(c.prior().space().label(0) == "l:a");
    CHECK(c.prior().space().label(2) == "r:a");
    CHECK(relative_entropy(c) == relative_entropy(m1));
  }

  SUBCASE("interior weights average the entropies") {
    StatMorphism c = convex_combine(Dist(base, {0.5, 0.5}), {m1, m2});
    ExtReal expect = weighted(0.5, relative_entropy(m1)) +
                     weighted(0.5, relative_entropy(m2));
    CHECK(ext_close(relative_entropy(c), expect, 1e-9));
  }

  SUBCASE("an infinite component with positive weight dominates") {
    StatMorphism inf_part = collapse(0.75, 1.0);
    StatMorphism c = convex_combine(Dist(base, {0.5, 0.5}), {m1, inf_part});
    CHECK(!relative_entropy(c).finite());
    // ...but gets erased by weight zero.
    StatMorphism c0 = convex_combine(Dist(base, {1.0, 0.0}), {m1, inf_part});
    CHECK(relative_entropy(c0).finite());
  }

  CHECK_THROWS_AS(convex_combine(Dist(base, {0.5, 0.5}), {m1}), SizeError);
  CHECK_THROWS_AS(
      convex_combine(Dist(FinSet({"l"}), {1.0}), std::vector<StatMorphism>{}),
      EmptyFamily);
}
