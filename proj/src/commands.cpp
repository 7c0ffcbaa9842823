#include "finstat/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "finstat/errors.hpp"

namespace finstat {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

int usage_error(std::ostream& err, const std::string& msg) {
  err << "error: " << msg << "\n";
  return 2;
}

// Uniform exit-code mapping: structural problems (unreadable or malformed
// input, bad names) are usage-level (2); everything the library rejects on
// mathematical grounds is a semantic failure (1).
template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    return usage_error(err, e.what());
  } catch (const DanglingReference& e) {
    return usage_error(err, e.what());
  } catch (const DuplicateName& e) {
    return usage_error(err, e.what());
  } catch (const UnknownSuite& e) {
    return usage_error(err, e.what());
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    return usage_error(err, e.what());
  }
}

std::string format_entropy(ExtReal v, LogBase base) {
  if (!v.finite()) return "inf";
  double x = v.value();
  if (base == LogBase::two) x /= std::numbers::ln2;
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%#.12g", x);
  return buf;
}

std::size_t draw_size_arg(const GenConfig& cfg, const char* tag) {
  Rng rng(cfg.sub(tag, 0).seed);
  const std::size_t lo = std::min<std::size_t>(2, cfg.max_size);
  return lo + rng.next_below(cfg.max_size - lo + 1);
}

// compose names its output explicitly: a taken name is an input error, and
// value dedup against an equal existing entry must still bind the name.
template <class Map>
void claim_name(const Map& m, const char* kind, const std::string& name) {
  if (m.contains(name)) {
    throw DuplicateName(std::string(kind) + " '" + name +
                        "' is already defined");
  }
}

template <class Map>
void bind_as(Map& m, const std::string& name, const std::string& got) {
  if (got != name) m.emplace(name, m.at(got));
}

}  // namespace

int cmd_validate(const std::string& path, double tol, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const Document doc = parse_document(read_file(path));
    const ValidationReport rep = validate_document(doc, tol);
    char line[256];
    std::snprintf(line, sizeof line, "%-13s %-24s %-12s %s\n", "kind", "name",
                  "violation", "status");
    out << line;
    for (const ValidationRow& r : rep.rows) {
      char viol[32];
      std::snprintf(viol, sizeof viol, "%.3g", r.violation);
      std::snprintf(line, sizeof line, "%-13s %-24s %-12s %s\n",
                    r.kind.c_str(), r.name.c_str(), viol,
                    r.ok ? "ok" : ("FAIL: " + r.message).c_str());
      out << line;
    }
    return rep.all_ok() ? 0 : 1;
  });
}

int cmd_entropy(const std::string& path, const std::string& kind,
                const std::string& target, const std::string& against,
                LogBase base, double tol, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    const Document doc = parse_document(read_file(path));
    ExtReal v = 0.0;
    if (kind == "kl") {
      if (against.empty()) {
        return usage_error(err, "entropy kind 'kl' needs --against");
      }
      v = kl(build_dist(doc, target), build_dist(doc, against));
    } else if (kind == "re") {
      v = relative_entropy(build_morphism(doc, target, tol));
    } else if (kind == "ce") {
      v = conditional_re(build_two_morphism(doc, target, tol));
    } else if (kind == "re2") {
      v = relative_entropy(build_two_morphism(doc, target, tol));
    } else {
      return usage_error(err, "unknown entropy kind '" + kind + "'");
    }
    out << format_entropy(v, base) << "\n";
    return 0;
  });
}

int cmd_compose(const std::string& path, const std::string& mode,
                const std::string& left, const std::string& right,
                const std::string& out_name, double tol, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    Document doc = parse_document(read_file(path));
    if (mode == "channel") {
      claim_name(doc.channels, "channel", out_name);
      bind_as(doc.channels, out_name,
              add_channel(doc, out_name,
                          compose(build_channel(doc, left),
                                  build_channel(doc, right))));
    } else if (mode == "morphism") {
      claim_name(doc.morphisms, "morphism", out_name);
      bind_as(doc.morphisms, out_name,
              add_morphism(doc, out_name,
                           compose(build_morphism(doc, left, tol),
                                   build_morphism(doc, right, tol), tol)));
    } else if (mode == "vertical") {
      claim_name(doc.two_morphisms, "two_morphism", out_name);
      // left runs below right: left ∘ right stacks right on top.
      bind_as(doc.two_morphisms, out_name,
              add_two_morphism(
                  doc, out_name,
                  vertical_compose(build_two_morphism(doc, left, tol),
                                   build_two_morphism(doc, right, tol), tol)));
    } else if (mode == "horizontal") {
      claim_name(doc.two_morphisms, "two_morphism", out_name);
      bind_as(doc.two_morphisms, out_name,
              add_two_morphism(
                  doc, out_name,
                  horizontal_compose(build_two_morphism(doc, left, tol),
                                     build_two_morphism(doc, right, tol),
                                     tol)));
    } else {
      return usage_error(err, "unknown compose mode '" + mode + "'");
    }
    out << serialize_document(doc);
    return 0;
  });
}

int cmd_check(const std::string& suite, std::uint64_t trials,
              const GenConfig& cfg, double tol, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    const std::vector<std::string> names =
        suite == "all" ? suite_names() : std::vector<std::string>{suite};
    std::vector<SuiteReport> reps;
    bool failed = false;
    for (const std::string& name : names) {
      SuiteReport rep = run_suite(name, trials, cfg, tol);
      char line[160];
      std::snprintf(line, sizeof line, "%s: %llu/%llu passed, %.3fs\n",
                    name.c_str(),
                    static_cast<unsigned long long>(rep.passes),
                    static_cast<unsigned long long>(rep.trials),
                    rep.elapsed_seconds);
      err << line;
      if (!rep.probe && rep.passes < rep.trials) failed = true;
      reps.push_back(std::move(rep));
    }
    out << (suite == "all" ? serialize_reports(reps)
                           : serialize_report(reps.front()));
    return failed ? 1 : 0;
  });
}

int cmd_generate(const std::string& kind, const GenConfig& cfg,
                 std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Document doc;
    if (kind == "dist") {
      const FinSet x = make_space(draw_size_arg(cfg, "nx"));
      ensure_space(doc, x, "X");
      add_dist(doc, "p", random_dist(x, cfg.sub("p", 0)));
    } else if (kind == "channel") {
      const FinSet x = make_space(draw_size_arg(cfg, "nx"));
      const FinSet y = make_space(draw_size_arg(cfg, "ny"));
      ensure_space(doc, x, "X");
      ensure_space(doc, y, "Y");
      add_channel(doc, "f", random_channel(x, y, cfg.sub("f", 0)));
    } else if (kind == "morphism") {
      const StatMorphism m = random_stat_morphism(cfg);
      ensure_space(doc, m.map().dom(), "X");
      ensure_space(doc, m.map().cod(), "Y");
      add_morphism(doc, "m", m);
    } else if (kind == "two_morphism") {
      const TwoMorphism sq = random_two_morphism(cfg);
      ensure_space(doc, sq.top().dom(), "X");
      ensure_space(doc, sq.top().cod(), "Y");
      ensure_space(doc, sq.bottom().dom(), "Xp");
      ensure_space(doc, sq.bottom().cod(), "Yp");
      add_two_morphism(doc, "sq", sq);
    } else if (kind == "stacked_pair") {
      const auto [upper, lower] = stacked_pair(cfg);
      ensure_space(doc, upper.top().dom(), "X");
      ensure_space(doc, upper.top().cod(), "Y");
      ensure_space(doc, upper.bottom().dom(), "Xp");
      ensure_space(doc, upper.bottom().cod(), "Yp");
      ensure_space(doc, lower.bottom().dom(), "Xpp");
      ensure_space(doc, lower.bottom().cod(), "Ypp");
      add_two_morphism(doc, "upper", upper);
      add_two_morphism(doc, "lower", lower);
    } else {
      return usage_error(err, "unknown generate kind '" + kind + "'");
    }
    out << serialize_document(doc);
    return 0;
  });
}

}  // namespace finstat
