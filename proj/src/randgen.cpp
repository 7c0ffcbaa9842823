#include "finstat/randgen.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "finstat/errors.hpp"

namespace finstat {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix_step(std::uint64_t& x) {
  x += kGolden;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t rotl(std::uint64_t v, int k) {
  return (v << k) | (v >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  for (auto& word : s_) word = splitmix_step(seed);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t Rng::next_below(std::size_t n) {
  if (n == 0) throw SizeError("Rng::next_below: n must be positive");
  using u128 = unsigned __int128;
  return static_cast<std::size_t>(
      (static_cast<u128>(next_u64()) * static_cast<u128>(n)) >> 64);
}

GenConfig GenConfig::sub(std::string_view tag, std::uint64_t index) const {
  std::uint64_t x = seed ^ fnv1a64(tag) ^ (kGolden * (index + 1));
  splitmix_step(x);
  GenConfig out = *this;
  out.seed = splitmix_step(x);
  return out;
}

FinSet make_space(std::size_t size) {
  std::vector<std::string> labels(size);
  for (std::size_t i = 0; i < size; ++i) {
    std::string l(1, static_cast<char>('a' + i % 26));
    if (i >= 26) l += std::to_string(i / 26);
    labels[i] = std::move(l);
  }
  return FinSet(std::move(labels));
}

namespace {

constexpr double kSupportFloor = 1e-9;
constexpr double kZeroProb = 0.2;

std::size_t size_between(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + rng.next_below(hi - lo + 1);
}

// Uniform point of the simplex via spacings of sorted uniforms. Only
// comparisons and subtraction, so results are bit-stable across platforms.
void simplex_row(Rng& rng, double* out, std::size_t n) {
  if (n == 1) {
    out[0] = 1.0;
    return;
  }
  std::vector<double> cuts(n - 1);
  for (auto& c : cuts) c = rng.next_double();
  std::sort(cuts.begin(), cuts.end());
  double prev = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out[i] = cuts[i] - prev;
    prev = cuts[i];
  }
  out[n - 1] = 1.0 - prev;
}

// One stochastic row under the config's sampling mode.
void sample_row(Rng& rng, double* out, std::size_t n, const GenConfig& cfg) {
  if (cfg.full_support) {
    for (;;) {
      simplex_row(rng, out, n);
      if (*std::min_element(out, out + n) >= kSupportFloor) return;
    }
  }
  simplex_row(rng, out, n);
  if (cfg.dirichlet_like || n == 1) return;
  for (;;) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.next_double() < kZeroProb) out[i] = 0.0;
      sum += out[i];
    }
    if (sum > 0.0) {
      for (std::size_t i = 0; i < n; ++i) out[i] /= sum;
      return;
    }
    simplex_row(rng, out, n);  // the whole row went to zero
  }
}

Dist dist_impl(Rng& rng, const FinSet& space, const GenConfig& cfg) {
  std::vector<double> v(space.size());
  sample_row(rng, v.data(), v.size(), cfg);
  return Dist(space, std::move(v));
}

Channel channel_impl(Rng& rng, const FinSet& dom, const FinSet& cod,
                     const GenConfig& cfg) {
  std::vector<double> e(dom.size() * cod.size());
  for (std::size_t x = 0; x < dom.size(); ++x) {
    sample_row(rng, e.data() + x * cod.size(), cod.size(), cfg);
  }
  return Channel(dom, cod, std::move(e));
}

DetMap surjection_impl(Rng& rng, const FinSet& dom, const FinSet& cod) {
  if (dom.size() < cod.size()) {
    throw SizeError("random_surjection: domain smaller than codomain");
  }
  // Partial Fisher-Yates picks one distinct preimage per cod element.
  std::vector<std::size_t> perm(dom.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::vector<std::size_t> img(dom.size(), cod.size());
  for (std::size_t y = 0; y < cod.size(); ++y) {
    std::swap(perm[y], perm[y + rng.next_below(dom.size() - y)]);
    img[perm[y]] = y;
  }
  for (std::size_t x = 0; x < dom.size(); ++x) {
    if (img[x] == cod.size()) img[x] = rng.next_below(cod.size());
  }
  return DetMap(dom, cod, std::move(img));
}

Channel section_impl(Rng& rng, const DetMap& f, const GenConfig& cfg) {
  const auto fibers = f.fibers();
  const std::size_t nx = f.dom().size();
  std::vector<double> e(f.cod().size() * nx, 0.0);
  std::vector<double> w;
  for (std::size_t y = 0; y < fibers.size(); ++y) {
    const auto& fiber = fibers[y];
    if (fiber.empty()) {
      throw NotSurjective("random_section: empty fiber over '" +
                          f.cod().label(y) + "'");
    }
    w.resize(fiber.size());
    sample_row(rng, w.data(), w.size(), cfg);
    for (std::size_t i = 0; i < fiber.size(); ++i) {
      e[y * nx + fiber[i]] = w[i];
    }
  }
  return Channel(f.cod(), f.dom(), std::move(e));
}

// The fiber-splitting step: given the coarse channel X' ⇝ Y' and vertical
// maps mu : X -> X', nu : Y -> Y', distribute each coarse entry's mass over
// the matching nu-fiber with fresh convex weights. The commuting condition
// nu∘result = coarse∘mu then holds exactly, so no rejection is ever needed.
Channel split_up(Rng& rng, const Channel& coarse, const DetMap& mu,
                 const DetMap& nu, const GenConfig& cfg) {
  const auto fibers = nu.fibers();
  const std::size_t nx = mu.dom().size();
  const std::size_t ny = nu.dom().size();
  std::vector<double> e(nx * ny, 0.0);
  std::vector<double> w;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t yp = 0; yp < fibers.size(); ++yp) {
      const auto& fiber = fibers[yp];
      if (fiber.empty()) {
        throw NotSurjective("split_up: empty fiber over '" +
                            nu.cod().label(yp) + "'");
      }
      const double mass = coarse.at(mu(x), yp);
      w.resize(fiber.size());
      sample_row(rng, w.data(), w.size(), cfg);
      for (std::size_t i = 0; i < fiber.size(); ++i) {
        e[x * ny + fiber[i]] = mass * w[i];
      }
    }
  }
  return Channel(mu.dom(), nu.dom(), std::move(e));
}

StatMorphism stat_morphism_impl(Rng& rng, const GenConfig& cfg) {
  const std::size_t lo = std::min<std::size_t>(2, cfg.max_size);
  const std::size_t nx = size_between(rng, lo, cfg.max_size);
  const std::size_t nxp = size_between(rng, 1, nx);
  const FinSet x = make_space(nx);
  const FinSet xp = make_space(nxp);
  DetMap f = surjection_impl(rng, x, xp);
  Dist p = dist_impl(rng, x, cfg);
  Channel s = section_impl(rng, f, cfg);
  return StatMorphism::make(std::move(f), std::move(p), std::move(s));
}

struct SquareParts {
  DetMap mu;
  DetMap nu;
  Channel top;
  Channel bottom;
  Channel t;
  Dist p;
};

SquareParts square_parts_impl(Rng& rng, const GenConfig& cfg) {
  const std::size_t lo = std::min<std::size_t>(2, cfg.max_size);
  const std::size_t nx = size_between(rng, lo, cfg.max_size);
  const std::size_t nxp = size_between(rng, 1, nx);
  const std::size_t ny = size_between(rng, lo, cfg.max_size);
  const std::size_t nyp = size_between(rng, 1, ny);
  const FinSet x = make_space(nx);
  const FinSet xp = make_space(nxp);
  const FinSet y = make_space(ny);
  const FinSet yp = make_space(nyp);
  DetMap mu = surjection_impl(rng, x, xp);
  DetMap nu = surjection_impl(rng, y, yp);
  Channel t = section_impl(rng, nu, cfg);
  Channel bottom = channel_impl(rng, xp, yp, cfg);
  Channel top = split_up(rng, bottom, mu, nu, cfg);
  Dist p = dist_impl(rng, x, cfg);
  return {std::move(mu), std::move(nu),    std::move(top),
          std::move(bottom), std::move(t), std::move(p)};
}

TwoMorphism two_morphism_impl(Rng& rng, const GenConfig& cfg) {
  SquareParts sp = square_parts_impl(rng, cfg);
  Channel s = section_impl(rng, sp.mu, cfg);
  Dist q = apply(sp.top, sp.p);
  StatMorphism dom = StatMorphism::make(sp.mu, sp.p, std::move(s));
  StatMorphism cod = StatMorphism::make(sp.nu, std::move(q), sp.t);
  return TwoMorphism::make(std::move(dom), std::move(cod), std::move(sp.top),
                           std::move(sp.bottom));
}

Dist full_support_dist(Rng& rng, const FinSet& space, const GenConfig& cfg) {
  GenConfig full = cfg;
  full.full_support = true;
  return dist_impl(rng, space, full);
}

Channel full_support_section(Rng& rng, const DetMap& f, const GenConfig& cfg) {
  GenConfig full = cfg;
  full.full_support = true;
  return section_impl(rng, f, full);
}

}  // namespace

Dist random_dist(const FinSet& space, const GenConfig& cfg) {
  Rng rng(cfg.seed);
  return dist_impl(rng, space, cfg);
}

Channel random_channel(const FinSet& dom, const FinSet& cod,
                       const GenConfig& cfg) {
  Rng rng(cfg.seed);
  return channel_impl(rng, dom, cod, cfg);
}

DetMap random_surjection(const FinSet& dom, const FinSet& cod,
                         const GenConfig& cfg) {
  Rng rng(cfg.seed);
  return surjection_impl(rng, dom, cod);
}

Channel random_section(const DetMap& f, const GenConfig& cfg) {
  Rng rng(cfg.seed);
  return section_impl(rng, f, cfg);
}

StatMorphism random_stat_morphism(const GenConfig& cfg) {
  Rng rng(cfg.seed);
  return stat_morphism_impl(rng, cfg);
}

std::pair<StatMorphism, StatMorphism> composable_stat_pair(
    const GenConfig& cfg) {
  Rng rng(cfg.seed);
  StatMorphism inner = stat_morphism_impl(rng, cfg);
  const FinSet& mid = inner.map().cod();
  const std::size_t nz = size_between(rng, 1, mid.size());
  const FinSet z = make_space(nz);
  DetMap g = surjection_impl(rng, mid, z);
  Channel t = section_impl(rng, g, cfg);
  StatMorphism outer =
      StatMorphism::make(std::move(g), inner.pushforward(), std::move(t));
  return {std::move(outer), std::move(inner)};
}

TwoMorphism random_two_morphism(const GenConfig& cfg) {
  Rng rng(cfg.seed);
  return two_morphism_impl(rng, cfg);
}

TwoMorphism optimal_two_morphism(const GenConfig& cfg) {
  Rng rng(cfg.seed);
  SquareParts sp = square_parts_impl(rng, cfg);
  // Overwrite the split top with the reconstruction route itself; the two
  // channels then agree bitwise and the conditional term vanishes exactly.
  Channel top = compose(compose(sp.t, sp.bottom), lift(sp.mu));
  Dist q = apply(top, sp.p);
  StatMorphism dom =
      StatMorphism::make(sp.mu, sp.p, bayes_inverse(sp.mu, sp.p));
  StatMorphism cod = StatMorphism::make(sp.nu, std::move(q), sp.t);
  return TwoMorphism::make(std::move(dom), std::move(cod), std::move(top),
                           std::move(sp.bottom));
}

std::pair<TwoMorphism, TwoMorphism> stacked_pair(const GenConfig& cfg) {
  Rng rng(cfg.seed);
  const std::size_t lo = std::min<std::size_t>(2, cfg.max_size);
  const std::size_t nx = size_between(rng, lo, cfg.max_size);
  const std::size_t nxp = size_between(rng, 1, nx);
  const std::size_t nxpp = size_between(rng, 1, nxp);
  const std::size_t ny = size_between(rng, lo, cfg.max_size);
  const std::size_t nyp = size_between(rng, 1, ny);
  const std::size_t nypp = size_between(rng, 1, nyp);
  const FinSet x = make_space(nx), xp = make_space(nxp), xpp = make_space(nxpp);
  const FinSet y = make_space(ny), yp = make_space(nyp), ypp = make_space(nypp);

  DetMap mu = surjection_impl(rng, x, xp);
  DetMap mup = surjection_impl(rng, xp, xpp);
  DetMap nu = surjection_impl(rng, y, yp);
  DetMap nup = surjection_impl(rng, yp, ypp);
  Channel s = section_impl(rng, mu, cfg);
  Channel sp_ = section_impl(rng, mup, cfg);
  Channel t = section_impl(rng, nu, cfg);
  Channel tp = section_impl(rng, nup, cfg);

  Channel f2 = channel_impl(rng, xpp, ypp, cfg);  // coarsest channel first
  Channel f1 = split_up(rng, f2, mup, nup, cfg);
  Channel f0 = split_up(rng, f1, mu, nu, cfg);
  Dist p = dist_impl(rng, x, cfg);
  Dist q = apply(f0, p);

  StatMorphism dom_u = StatMorphism::make(mu, p, std::move(s));
  StatMorphism cod_u = StatMorphism::make(nu, q, std::move(t));
  TwoMorphism upper =
      TwoMorphism::make(dom_u, cod_u, std::move(f0), f1);

  StatMorphism dom_l =
      StatMorphism::make(mup, upper.dom().pushforward(), std::move(sp_));
  StatMorphism cod_l =
      StatMorphism::make(nup, upper.cod().pushforward(), std::move(tp));
  TwoMorphism lower = TwoMorphism::make(std::move(dom_l), std::move(cod_l),
                                        std::move(f1), std::move(f2));
  return {std::move(upper), std::move(lower)};
}

std::pair<TwoMorphism, TwoMorphism> adjacent_pair(const GenConfig& cfg) {
  Rng rng(cfg.seed);
  TwoMorphism left = two_morphism_impl(rng, cfg);
  const FinSet& ypr = left.bottom().cod();
  const std::size_t lo = std::min<std::size_t>(2, cfg.max_size);
  const std::size_t nz = size_between(rng, lo, cfg.max_size);
  const std::size_t nzp = size_between(rng, 1, nz);
  const FinSet z = make_space(nz);
  const FinSet zp = make_space(nzp);
  DetMap xi = surjection_impl(rng, z, zp);
  Channel u = section_impl(rng, xi, cfg);
  Channel gp = channel_impl(rng, ypr, zp, cfg);
  Channel g = split_up(rng, gp, left.cod().map(), xi, cfg);
  Dist r = apply(g, left.cod().prior());
  StatMorphism cod =
      StatMorphism::make(std::move(xi), std::move(r), std::move(u));
  TwoMorphism right = TwoMorphism::make(left.cod(), std::move(cod),
                                        std::move(g), std::move(gp));
  return {std::move(left), std::move(right)};
}

namespace {

std::vector<double> mix_vec(const std::vector<double>& a,
                            const std::vector<double>& b, double w) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = (1.0 - w) * a[i] + w * b[i];
  }
  return out;
}

}  // namespace

StatSequence::StatSequence(StatMorphism target, Dist mix_prior,
                           Channel mix_section, std::uint64_t n_max)
    : target_(std::move(target)),
      mix_prior_(std::move(mix_prior)),
      mix_section_(std::move(mix_section)),
      n_max_(n_max) {}

StatMorphism StatSequence::at(std::uint64_t n) const {
  if (n < 1 || n > n_max_) {
    throw SizeError("StatSequence::at: index outside [1, n_max]");
  }
  const double w = 1.0 / static_cast<double>(n);
  Dist p(target_.prior().space(),
         mix_vec(target_.prior().probs(), mix_prior_.probs(), w));
  Channel s(target_.section().dom(), target_.section().cod(),
            mix_vec(target_.section().entries(), mix_section_.entries(), w));
  return StatMorphism::make(target_.map(), std::move(p), std::move(s));
}

StatSequence convergent_stat_sequence(const StatMorphism& target,
                                      std::uint64_t n_max,
                                      const GenConfig& cfg) {
  Rng rng(cfg.seed);
  Dist mp = full_support_dist(rng, target.prior().space(), cfg);
  Channel ms = full_support_section(rng, target.map(), cfg);
  return StatSequence(target, std::move(mp), std::move(ms), n_max);
}

TwoSequence::TwoSequence(TwoMorphism target, Dist mix_prior,
                         Channel mix_dom_section, Channel mix_cod_section,
                         Channel mix_top, Channel mix_bottom,
                         std::uint64_t n_max)
    : target_(std::move(target)),
      mix_prior_(std::move(mix_prior)),
      mix_dom_section_(std::move(mix_dom_section)),
      mix_cod_section_(std::move(mix_cod_section)),
      mix_top_(std::move(mix_top)),
      mix_bottom_(std::move(mix_bottom)),
      n_max_(n_max) {}

TwoMorphism TwoSequence::at(std::uint64_t n) const {
  if (n < 1 || n > n_max_) {
    throw SizeError("TwoSequence::at: index outside [1, n_max]");
  }
  const double w = 1.0 / static_cast<double>(n);
  const StatMorphism& d = target_.dom();
  const StatMorphism& c = target_.cod();
  Dist p(d.prior().space(), mix_vec(d.prior().probs(), mix_prior_.probs(), w));
  Channel s(d.section().dom(), d.section().cod(),
            mix_vec(d.section().entries(), mix_dom_section_.entries(), w));
  Channel t(c.section().dom(), c.section().cod(),
            mix_vec(c.section().entries(), mix_cod_section_.entries(), w));
  Channel top(target_.top().dom(), target_.top().cod(),
              mix_vec(target_.top().entries(), mix_top_.entries(), w));
  Channel bottom(
      target_.bottom().dom(), target_.bottom().cod(),
      mix_vec(target_.bottom().entries(), mix_bottom_.entries(), w));
  Dist q = apply(top, p);
  StatMorphism dom = StatMorphism::make(d.map(), std::move(p), std::move(s));
  StatMorphism cod = StatMorphism::make(c.map(), std::move(q), std::move(t));
  return TwoMorphism::make(std::move(dom), std::move(cod), std::move(top),
                           std::move(bottom));
}

TwoSequence convergent_sequence(const TwoMorphism& target, std::uint64_t n_max,
                                const GenConfig& cfg) {
  Rng rng(cfg.seed);
  GenConfig full = cfg;
  full.full_support = true;
  Dist mp = full_support_dist(rng, target.dom().prior().space(), cfg);
  Channel ms = full_support_section(rng, target.dom().map(), cfg);
  Channel mt = full_support_section(rng, target.cod().map(), cfg);
  // The mixing channel pair must commute with the legs like the target does,
  // so it is built by the same splitting step, with full-support weights.
  Channel mbottom =
      channel_impl(rng, target.bottom().dom(), target.bottom().cod(), full);
  Channel mtop =
      split_up(rng, mbottom, target.dom().map(), target.cod().map(), full);
  return TwoSequence(target, std::move(mp), std::move(ms), std::move(mt),
                     std::move(mtop), std::move(mbottom), n_max);
}

}  // namespace finstat
