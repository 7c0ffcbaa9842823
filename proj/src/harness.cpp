#include "finstat/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <tuple>

#include "canon.hpp"
#include "finstat/errors.hpp"

namespace finstat {

namespace {

struct TrialResult {
  ExtReal violation = 0.0;
  // Filled when the trial fails (probe suites: when the probed value is
  // notable); serialized into the report, capped and size-sorted.
  std::optional<Document> instance;
  double probe_value = 0.0;
};

std::size_t draw_between(const GenConfig& cfg, const char* tag,
                         std::size_t lo, std::size_t hi) {
  Rng rng(cfg.sub(tag, 0).seed);
  return lo + rng.next_below(hi - lo + 1);
}

std::size_t draw_size(const GenConfig& cfg, const char* tag) {
  const std::size_t lo = std::min<std::size_t>(2, cfg.max_size);
  return draw_between(cfg, tag, lo, cfg.max_size);
}

GenConfig capped(GenConfig cfg, std::size_t cap) {
  cfg.max_size = std::min(cfg.max_size, cap);
  return cfg;
}

// --- deterministic infinite-value instances for the convex suites ---------

// Collapsing two points with a section that rules one of them out: the
// retrodiction (1, 0) cannot explain the prior (1/2, 1/2).
StatMorphism infinite_re_morphism() {
  FinSet x({"a", "b"});
  FinSet y({"u"});
  return StatMorphism::make(DetMap(x, y, {0, 0}), Dist(x, {0.5, 0.5}),
                            Channel(y, x, {1.0, 0.0}));
}

// One-point bottom row, two-point top output: the cod section t ignores
// output "v", so the reconstruction has a zero exactly where the top
// channel has mass and the conditional term is infinite.
TwoMorphism infinite_ce_square() {
  FinSet x({"a"});
  FinSet y({"u", "v"});
  FinSet xp({"a"});
  FinSet yp({"u"});
  StatMorphism dom = StatMorphism::make(DetMap(x, xp, {0}), Dist(x, {1.0}),
                                        Channel(xp, x, {1.0}));
  StatMorphism cod =
      StatMorphism::make(DetMap(y, yp, {0, 0}), Dist(y, {0.5, 0.5}),
                         Channel(yp, y, {1.0, 0.0}));
  return TwoMorphism::make(std::move(dom), std::move(cod),
                           Channel(x, y, {0.5, 0.5}), Channel(xp, yp, {1.0}));
}

// --- suite trial bodies ----------------------------------------------------

TrialResult trial_chain_rule(const GenConfig& sub, double, std::uint64_t) {
  const FinSet x = make_space(draw_size(sub, "nx"));
  const FinSet y = make_space(draw_size(sub, "ny"));
  Dist p = random_dist(x, sub.sub("p", 0));
  Dist q = random_dist(x, sub.sub("q", 0));
  Channel f = random_channel(x, y, sub.sub("f", 0));
  Channel g = random_channel(x, y, sub.sub("g", 0));
  const ExtReal lhs = kl(joint(f, p), joint(g, q));
  const ExtReal rhs = kl(p, q) + conditional_kl(f, g, p);
  TrialResult r;
  r.violation = ext_violation(lhs, rhs);
  Document d;
  add_dist(d, "p", p);
  add_dist(d, "q", q);
  add_channel(d, "f", f);
  add_channel(d, "g", g);
  r.instance = std::move(d);
  return r;
}

TrialResult trial_re_functorial(const GenConfig& sub, double, std::uint64_t) {
  auto [outer, inner] = composable_stat_pair(sub);
  const ExtReal lhs = relative_entropy(compose(outer, inner));
  const ExtReal rhs = relative_entropy(outer) + relative_entropy(inner);
  TrialResult r;
  r.violation = ext_violation(lhs, rhs);
  Document d;
  add_morphism(d, "inner", inner);
  add_morphism(d, "outer", outer);
  r.instance = std::move(d);
  return r;
}

TrialResult trial_re_convex(const GenConfig& sub, double, std::uint64_t trial) {
  const GenConfig comp_cfg = capped(sub, 4);
  Dist base = trial == 0
                  ? Dist(make_space(2), {0.5, 0.5})
                  : random_dist(
                        make_space(draw_between(sub, "k", 1,
                                                std::min<std::size_t>(
                                                    4, sub.max_size))),
                        sub.sub("base", 0));
  std::vector<StatMorphism> family;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (trial == 0 && i == 0) {
      family.push_back(infinite_re_morphism());
    } else {
      family.push_back(random_stat_morphism(comp_cfg.sub("fam", i)));
    }
  }
  const ExtReal lhs = relative_entropy(convex_combine(base, family));
  ExtReal rhs = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    rhs += weighted(base[i], relative_entropy(family[i]));
  }
  TrialResult r;
  r.violation = ext_violation(lhs, rhs);
  Document d;
  add_dist(d, "base", base);
  for (std::size_t i = 0; i < family.size(); ++i) {
    add_morphism(d, "c" + std::to_string(i), family[i]);
  }
  r.instance = std::move(d);
  return r;
}

TrialResult trial_re_vanishing(const GenConfig& sub, double tol,
                               std::uint64_t) {
  const std::size_t nx = draw_size(sub, "nx");
  const FinSet x = make_space(nx);
  const FinSet xp = make_space(draw_between(sub, "nxp", 1, nx));
  DetMap f = random_surjection(x, xp, sub.sub("f", 0));
  Dist p = random_dist(x, sub.sub("p", 0));
  StatMorphism m = StatMorphism::make(f, p, bayes_inverse(f, p));
  TrialResult r;
  r.violation = relative_entropy(m);
  if (!is_optimal(m, tol)) r.violation = ExtReal::infinity();
  Document d;
  add_morphism(d, "m", m);
  r.instance = std::move(d);
  return r;
}

constexpr std::uint64_t kLscNMax = 1000000;
constexpr std::uint64_t kLscSamples[] = {10, 100, 1000, 10000, 1000000};

TrialResult trial_re_lsc(const GenConfig& sub, double, std::uint64_t) {
  GenConfig tcfg = sub.sub("target", 0);
  tcfg.full_support = true;  // keeps every value along the sequence finite
  StatMorphism target = random_stat_morphism(tcfg);
  StatSequence seq = convergent_stat_sequence(target, kLscNMax,
                                              sub.sub("mix", 0));
  double tail_min = std::numeric_limits<double>::infinity();
  for (std::uint64_t n : kLscSamples) {
    const double v = relative_entropy(seq.at(n)).value();
    if (n >= 1000) tail_min = std::min(tail_min, v);
  }
  const double limit = relative_entropy(target).value();
  TrialResult r;
  r.violation = ExtReal(std::max(0.0, limit - tail_min));
  Document d;
  add_morphism(d, "target", target);
  add_morphism(d, "element_1000", seq.at(1000));
  r.instance = std::move(d);
  return r;
}

TrialResult trial_pure_compose(const GenConfig& sub, double, std::uint64_t) {
  const FinSet x = make_space(draw_size(sub, "nx"));
  const FinSet y = make_space(draw_size(sub, "ny"));
  const FinSet z = make_space(draw_size(sub, "nz"));
  // Any function, not only surjections.
  Rng rng(sub.sub("map", 0).seed);
  std::vector<std::size_t> img(x.size());
  for (auto& v : img) v = rng.next_below(y.size());
  DetMap f(x, y, std::move(img));
  Channel g = random_channel(y, z, sub.sub("g", 0));
  double v = max_abs_diff(compose(g, lift(f)), compose_pure_fast(g, f));
  if (!is_pure(lift(f)) || !(as_det(lift(f)) == f)) {
    v = std::numeric_limits<double>::infinity();
  }
  // Section after a channel: the other collapsing identity.
  const FinSet w = make_space(draw_between(sub, "nw", 1, z.size()));
  DetMap h = random_surjection(z, w, sub.sub("h", 0));
  Channel s = random_section(h, sub.sub("s", 0));
  Channel c = random_channel(x, w, sub.sub("c", 0));
  v = std::max(v, max_abs_diff(compose(s, c), compose_section_fast(s, h, c)));
  TrialResult r;
  r.violation = ExtReal(v);
  Document d;
  add_det_map(d, "f", f);
  add_channel(d, "g", g);
  add_det_map(d, "h", h);
  add_channel(d, "s", s);
  add_channel(d, "c", c);
  r.instance = std::move(d);
  return r;
}

TrialResult trial_joint_marginal(const GenConfig& sub, double tol,
                                 std::uint64_t) {
  TwoMorphism sq = random_two_morphism(sub);
  JointMarginalReport rep = joint_marginal_check(sq, tol);
  TrialResult r;
  r.violation = ExtReal(rep.max_violation);
  Document d;
  add_two_morphism(d, "sq", sq);
  r.instance = std::move(d);
  return r;
}

TrialResult trial_ce_closed_form(const GenConfig& sub, double, std::uint64_t) {
  TwoMorphism sq = random_two_morphism(sub);
  TrialResult r;
  r.violation =
      ext_violation(conditional_re(sq), conditional_re_closed_form(sq));
  Document d;
  add_two_morphism(d, "sq", sq);
  r.instance = std::move(d);
  return r;
}

template <ExtReal (*Value)(const TwoMorphism&)>
TrialResult trial_vertical(const GenConfig& sub, double, std::uint64_t) {
  auto [upper, lower] = stacked_pair(sub);
  TwoMorphism comp = vertical_compose(lower, upper);
  const ExtReal lhs = Value(comp);
  const ExtReal rhs = Value(upper) + Value(lower);
  TrialResult r;
  r.violation = ext_violation(lhs, rhs);
  Document d;
  add_two_morphism(d, "upper", upper);
  add_two_morphism(d, "lower", lower);
  r.instance = std::move(d);
  return r;
}

template <ExtReal (*Value)(const TwoMorphism&)>
TrialResult trial_two_convex(const GenConfig& sub, double,
                             std::uint64_t trial) {
  const GenConfig comp_cfg = capped(sub, 4);
  Dist base = trial == 0
                  ? Dist(make_space(2), {0.5, 0.5})
                  : random_dist(
                        make_space(draw_between(sub, "k", 1,
                                                std::min<std::size_t>(
                                                    4, sub.max_size))),
                        sub.sub("base", 0));
  std::vector<TwoMorphism> family;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (trial == 0 && i == 0) {
      family.push_back(infinite_ce_square());
    } else {
      family.push_back(random_two_morphism(comp_cfg.sub("fam", i)));
    }
  }
  const ExtReal lhs = Value(convex_combine(base, family));
  ExtReal rhs = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    rhs += weighted(base[i], Value(family[i]));
  }
  TrialResult r;
  r.violation = ext_violation(lhs, rhs);
  Document d;
  add_dist(d, "base", base);
  for (std::size_t i = 0; i < family.size(); ++i) {
    add_two_morphism(d, "c" + std::to_string(i), family[i]);
  }
  r.instance = std::move(d);
  return r;
}

TrialResult trial_ce_vanishing(const GenConfig& sub, double tol,
                               std::uint64_t) {
  TwoMorphism sq = optimal_two_morphism(sub);
  TrialResult r;
  r.violation = conditional_re(sq);
  if (!is_optimal(sq, tol)) r.violation = ExtReal::infinity();
  Document d;
  add_two_morphism(d, "sq", sq);
  r.instance = std::move(d);
  return r;
}

TrialResult trial_re2_lsc(const GenConfig& sub, double, std::uint64_t) {
  GenConfig tcfg = sub.sub("target", 0);
  tcfg.full_support = true;
  TwoMorphism target = random_two_morphism(tcfg);
  TwoSequence seq = convergent_sequence(target, kLscNMax, sub.sub("mix", 0));
  double tail_min = std::numeric_limits<double>::infinity();
  for (std::uint64_t n : kLscSamples) {
    const double v = relative_entropy(seq.at(n)).value();
    if (n >= 1000) tail_min = std::min(tail_min, v);
  }
  const double limit = relative_entropy(target).value();
  TrialResult r;
  r.violation = ExtReal(std::max(0.0, limit - tail_min));
  Document d;
  add_two_morphism(d, "target", target);
  add_two_morphism(d, "element_1000", seq.at(1000));
  r.instance = std::move(d);
  return r;
}

// Report-only: both sections Bayes-optimal does not force the conditional
// term to vanish; this measures how large it actually gets.
TrialResult trial_vanishing_probe(const GenConfig& sub, double,
                                  std::uint64_t) {
  TwoMorphism sq = random_two_morphism(sub);
  StatMorphism dom = StatMorphism::make(
      sq.dom().map(), sq.dom().prior(),
      bayes_inverse(sq.dom().map(), sq.dom().prior()));
  StatMorphism cod = StatMorphism::make(
      sq.cod().map(), sq.cod().prior(),
      bayes_inverse(sq.cod().map(), sq.cod().prior()));
  TwoMorphism opt = TwoMorphism::make(std::move(dom), std::move(cod),
                                      sq.top(), sq.bottom());
  // Finite here: Bayes rows are positive wherever the top channel puts
  // mass, and the commuting condition covers the bottom factor.
  const double ce = conditional_re(opt).value();
  TrialResult r;
  r.probe_value = ce;
  r.violation = ExtReal(ce);
  if (ce > 1e-6) {
    Document d;
    add_two_morphism(d, "sq", opt);
    r.instance = std::move(d);
  }
  return r;
}

using TrialFn = TrialResult (*)(const GenConfig&, double, std::uint64_t);

struct SuiteDef {
  const char* name;
  TrialFn fn;
  bool probe;
};

ExtReal ce_of(const TwoMorphism& sq) { return conditional_re(sq); }
ExtReal re2_of(const TwoMorphism& sq) { return relative_entropy(sq); }

constexpr SuiteDef kSuites[] = {
    {"chain_rule", trial_chain_rule, false},
    {"re_functorial", trial_re_functorial, false},
    {"re_convex", trial_re_convex, false},
    {"re_vanishing", trial_re_vanishing, false},
    {"re_lsc", trial_re_lsc, false},
    {"pure_compose", trial_pure_compose, false},
    {"joint_marginal", trial_joint_marginal, false},
    {"ce_closed_form", trial_ce_closed_form, false},
    {"ce_vertical", trial_vertical<ce_of>, false},
    {"ce_convex", trial_two_convex<ce_of>, false},
    {"ce_vanishing", trial_ce_vanishing, false},
    {"re2_vertical", trial_vertical<re2_of>, false},
    {"re2_convex", trial_two_convex<re2_of>, false},
    {"re2_lsc", trial_re2_lsc, false},
    {"vanishing_probe", trial_vanishing_probe, true},
};

std::size_t doc_size(const Document& d) {
  std::size_t n = 0;
  for (const auto& [name, labels] : d.spaces) {
    (void)name;
    n += labels.size();
  }
  return n;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const SuiteDef& def : kSuites) out.emplace_back(def.name);
  return out;
}

SuiteReport run_suite(const std::string& name, std::uint64_t trials,
                      const GenConfig& cfg, double tol,
                      const HarnessOptions& opts) {
  const SuiteDef* def = nullptr;
  for (const SuiteDef& s : kSuites) {
    if (name == s.name) def = &s;
  }
  if (def == nullptr) throw UnknownSuite("unknown suite '" + name + "'");

  const auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.suite = name;
  rep.trials = trials;
  rep.config = cfg;
  rep.tol = tol;

  std::vector<double> probe_values;
  std::vector<std::tuple<std::size_t, std::uint64_t, Document>> candidates;
  for (std::uint64_t i = 0; i < trials; ++i) {
    TrialResult t = def->fn(cfg.sub(name, i), tol, i);
    if (opts.inject_fault_at && *opts.inject_fault_at == i) {
      t.violation += ExtReal(1.0);
    }
    if (t.violation > rep.max_violation) rep.max_violation = t.violation;
    const bool pass = def->probe || t.violation <= ExtReal(tol);
    if (pass) ++rep.passes;
    if (def->probe) probe_values.push_back(t.probe_value);
    const bool keep = def->probe ? t.instance.has_value() : !pass;
    if (keep && t.instance) {
      candidates.emplace_back(doc_size(*t.instance), i,
                              std::move(*t.instance));
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) {
              return std::tie(std::get<0>(a), std::get<1>(a)) <
                     std::tie(std::get<0>(b), std::get<1>(b));
            });
  for (auto& [size, idx, doc] : candidates) {
    (void)size;
    (void)idx;
    if (rep.counterexamples.size() == 5) break;
    rep.counterexamples.push_back(std::move(doc));
  }

  if (def->probe) {
    ProbeStats st;
    if (!probe_values.empty()) {
      std::sort(probe_values.begin(), probe_values.end());
      const std::size_t n = probe_values.size();
      st.min = probe_values.front();
      st.max = probe_values.back();
      st.median = (probe_values[(n - 1) / 2] + probe_values[n / 2]) / 2.0;
    }
    rep.probe = st;
  }

  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

namespace detail {

void emit_report(Emitter& e, const SuiteReport& rep) {
  e.obj_open();
  e.key("config");
  e.obj_open();
  e.key("dirichlet_like");
  e.raw(rep.config.dirichlet_like ? "true" : "false");
  e.key("full_support");
  e.raw(rep.config.full_support ? "true" : "false");
  e.key("max_size");
  e.raw(std::to_string(rep.config.max_size));
  e.key("seed");
  e.raw(std::to_string(rep.config.seed));
  e.obj_close();
  e.key("counterexamples");
  if (rep.counterexamples.empty()) {
    e.raw("[]");
  } else {
    e.arr_open();
    for (const Document& d : rep.counterexamples) {
      e.item();
      emit_document(e, d);
    }
    e.arr_close();
  }
  e.key("max_violation");
  if (rep.max_violation.finite()) {
    e.num(rep.max_violation.value());
  } else {
    e.raw("\"inf\"");
  }
  e.key("passes");
  e.raw(std::to_string(rep.passes));
  if (rep.probe) {
    e.key("probe");
    e.obj_open();
    e.key("max");
    e.num(rep.probe->max);
    e.key("median");
    e.num(rep.probe->median);
    e.key("min");
    e.num(rep.probe->min);
    e.obj_close();
  }
  e.key("suite");
  e.str(rep.suite);
  e.key("tol");
  e.num(rep.tol);
  e.key("trials");
  e.raw(std::to_string(rep.trials));
  e.obj_close();
}

}  // namespace detail

std::string serialize_report(const SuiteReport& rep) {
  detail::Emitter e;
  detail::emit_report(e, rep);
  std::string out = e.take();
  out += '\n';
  return out;
}

std::string serialize_reports(const std::vector<SuiteReport>& reps) {
  detail::Emitter e;
  if (reps.empty()) {
    e.raw("[]");
  } else {
    e.arr_open();
    for (const SuiteReport& r : reps) {
      e.item();
      detail::emit_report(e, r);
    }
    e.arr_close();
  }
  std::string out = e.take();
  out += '\n';
  return out;
}

}  // namespace finstat
