#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <utility>

#include "finstat/two_morphism.hpp"

namespace finstat {

// xoshiro256** with splitmix64 seeding. Hand-rolled because standard library
// distributions are not reproducible across implementations; everything the
// generators emit must be bit-identical for a fixed seed on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random bits.
  double next_double();

  // Uniform in [0, n); n >= 1. Lemire multiply-shift, no modulo bias.
  std::size_t next_below(std::size_t n);

 private:
  std::array<std::uint64_t, 4> s_;
};

struct GenConfig {
  std::uint64_t seed = 42;
  std::size_t max_size = 6;
  // Forces strictly positive entries (floored away from zero).
  bool full_support = false;
  // Plain simplex-uniform rows. When this and full_support are both off,
  // entries are zeroed with probability 0.2 and rows renormalized
  // (all-zero rows are resampled).
  bool dirichlet_like = false;

  // Stream derivation for independent draws: same (tag, index) always maps
  // to the same sub-seed.
  GenConfig sub(std::string_view tag, std::uint64_t index) const;
};

// Labels "a".."z", then "a1", "b1", ... Fresh set of `size` elements.
FinSet make_space(std::size_t size);

Dist random_dist(const FinSet& space, const GenConfig& cfg);

Channel random_channel(const FinSet& dom, const FinSet& cod,
                       const GenConfig& cfg);

// Requires |dom| >= |cod| (SizeError); every cod element gets a preimage.
DetMap random_surjection(const FinSet& dom, const FinSet& cod,
                         const GenConfig& cfg);

// Rows supported on the fibers of f; in-fiber zeros appear in sparse mode.
Channel random_section(const DetMap& f, const GenConfig& cfg);

StatMorphism random_stat_morphism(const GenConfig& cfg);

// (outer, inner) with outer.prior == inner.pushforward bit-exactly.
std::pair<StatMorphism, StatMorphism> composable_stat_pair(const GenConfig& cfg);

// Built by fiber splitting: the bottom channel is drawn first, then each
// bottom entry's mass is split across the matching ν-fiber with random
// convex weights, which makes the square commute exactly. No rejection.
TwoMorphism random_two_morphism(const GenConfig& cfg);

// Random square post-processed so the top channel equals its own
// reconstruction (conditional_re is exactly zero) and the domain section is
// the Bayes inverse (domain leg optimal).
TwoMorphism optimal_two_morphism(const GenConfig& cfg);

// Vertically composable (upper, lower) sharing the middle row bit-exactly:
// drawn as one three-level tower, coarsest channel first, split upward twice,
// top prior pushed down.
std::pair<TwoMorphism, TwoMorphism> stacked_pair(const GenConfig& cfg);

// Horizontally composable (left, right): right.dom is left.cod itself.
std::pair<TwoMorphism, TwoMorphism> adjacent_pair(const GenConfig& cfg);

// Sequence m_n converging to a fixed morphism: every stochastic leg of the
// target is mixed with a fixed full-support draw at weight 1/n and dependent
// data re-derived, so elements validate and sit O(1/n) from the target.
class StatSequence {
 public:
  StatSequence(StatMorphism target, Dist mix_prior, Channel mix_section,
               std::uint64_t n_max);

  const StatMorphism& target() const { return target_; }
  std::uint64_t n_max() const { return n_max_; }

  // n in [1, n_max]; n = larger means closer to the target.
  StatMorphism at(std::uint64_t n) const;

 private:
  StatMorphism target_;
  Dist mix_prior_;
  Channel mix_section_;
  std::uint64_t n_max_;
};

StatSequence convergent_stat_sequence(const StatMorphism& target,
                                      std::uint64_t n_max, const GenConfig& cfg);

// Same for squares: p, s, t, top and bottom all mix toward a fixed
// full-support draw whose channel pair commutes with the target's legs
// (built by fiber splitting), so every element is a valid square.
class TwoSequence {
 public:
  TwoSequence(TwoMorphism target, Dist mix_prior, Channel mix_dom_section,
              Channel mix_cod_section, Channel mix_top, Channel mix_bottom,
              std::uint64_t n_max);

  const TwoMorphism& target() const { return target_; }
  std::uint64_t n_max() const { return n_max_; }
  TwoMorphism at(std::uint64_t n) const;

 private:
  TwoMorphism target_;
  Dist mix_prior_;
  Channel mix_dom_section_;
  Channel mix_cod_section_;
  Channel mix_top_;
  Channel mix_bottom_;
  std::uint64_t n_max_;
};

TwoSequence convergent_sequence(const TwoMorphism& target, std::uint64_t n_max,
                                const GenConfig& cfg);

}  // namespace finstat
