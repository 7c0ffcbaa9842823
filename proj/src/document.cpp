#include "finstat/document.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <set>
#include <utility>

#include <json.hpp>

#include "canon.hpp"
#include "finstat/errors.hpp"

namespace finstat {

namespace {

using nlohmann::json;

// Strict parse; object keys must be unique (nlohmann would silently keep
// the last occurrence otherwise).
json parse_json(const std::string& text) {
  std::vector<std::set<std::string>> seen;
  json::parser_callback_t cb = [&seen](int, json::parse_event_t ev,
                                       json& val) {
    if (ev == json::parse_event_t::object_start) {
      seen.emplace_back();
    } else if (ev == json::parse_event_t::object_end) {
      seen.pop_back();
    } else if (ev == json::parse_event_t::key) {
      auto key = val.get<std::string>();
      if (!seen.back().insert(key).second) {
        throw DuplicateName("duplicate key '" + key + "'");
      }
    }
    return true;
  };
  try {
    return json::parse(text, cb);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
}

const json& field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing key '" + key + "'");
  return *it;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& item : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return item.key() == a; })) {
      throw ParseError(where + ": unexpected key '" + item.key() + "'");
    }
  }
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a string");
  return j.get<std::string>();
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

const json& get_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  return j;
}

// Label-keyed probability map; exact zeros are dropped so the raw form is
// canonical (omitted entries mean zero).
std::map<std::string, double> get_probs(const json& j,
                                        const std::string& where) {
  std::map<std::string, double> out;
  for (const auto& item : get_object(j, where).items()) {
    const double v = get_number(item.value(), where + " '" + item.key() + "'");
    if (v != 0.0) out.emplace(item.key(), v);
  }
  return out;
}

bool has_label(const std::vector<std::string>& labels, const std::string& l) {
  return std::find(labels.begin(), labels.end(), l) != labels.end();
}

const std::vector<std::string>& ref_space(const Document& doc,
                                          const std::string& name,
                                          const std::string& where) {
  auto it = doc.spaces.find(name);
  if (it == doc.spaces.end()) {
    throw DanglingReference(where + ": unknown space '" + name + "'");
  }
  return it->second;
}

template <class Map>
void ref_name(const Map& m, const std::string& name, const char* kind,
              const std::string& where) {
  if (!m.contains(name)) {
    throw DanglingReference(where + ": unknown " + kind + " '" + name + "'");
  }
}

void check_labels(const std::vector<std::string>& labels,
                  const std::map<std::string, double>& probs,
                  const std::string& where) {
  for (const auto& [l, v] : probs) {
    (void)v;
    if (!has_label(labels, l)) {
      throw DanglingReference(where + ": unknown label '" + l + "'");
    }
  }
}

void resolve_references(const Document& doc) {
  for (const auto& [name, e] : doc.dists) {
    const std::string where = "dist '" + name + "'";
    check_labels(ref_space(doc, e.space, where), e.probs, where);
  }
  for (const auto& [name, e] : doc.det_maps) {
    const std::string where = "det_map '" + name + "'";
    const auto& dom = ref_space(doc, e.dom, where);
    const auto& cod = ref_space(doc, e.cod, where);
    for (const auto& [from, to] : e.image) {
      if (!has_label(dom, from)) {
        throw DanglingReference(where + ": unknown label '" + from + "'");
      }
      if (!has_label(cod, to)) {
        throw DanglingReference(where + ": unknown label '" + to + "'");
      }
    }
    for (const auto& l : dom) {
      if (!e.image.contains(l)) {
        throw ParseError(where + ": no image for label '" + l + "'");
      }
    }
  }
  for (const auto& [name, e] : doc.channels) {
    const std::string where = "channel '" + name + "'";
    const auto& dom = ref_space(doc, e.dom, where);
    const auto& cod = ref_space(doc, e.cod, where);
    for (const auto& [in, row] : e.rows) {
      if (!has_label(dom, in)) {
        throw DanglingReference(where + ": unknown label '" + in + "'");
      }
      check_labels(cod, row, where + " row '" + in + "'");
    }
  }
  for (const auto& [name, e] : doc.morphisms) {
    const std::string where = "morphism '" + name + "'";
    ref_name(doc.det_maps, e.map, "det_map", where);
    ref_name(doc.dists, e.prior, "dist", where);
    ref_name(doc.channels, e.section, "channel", where);
  }
  for (const auto& [name, e] : doc.two_morphisms) {
    const std::string where = "two_morphism '" + name + "'";
    ref_name(doc.morphisms, e.dom, "morphism", where);
    ref_name(doc.morphisms, e.cod, "morphism", where);
    ref_name(doc.channels, e.top, "channel", where);
    ref_name(doc.channels, e.bottom, "channel", where);
  }
}

}  // namespace

Document parse_document(const std::string& text) {
  const json root = parse_json(text);
  if (!root.is_object()) throw ParseError("top level: expected an object");
  check_keys(root,
             {"spaces", "dists", "det_maps", "channels", "morphisms",
              "two_morphisms"},
             "top level");
  Document doc;
  if (auto it = root.find("spaces"); it != root.end()) {
    for (const auto& item : get_object(*it, "spaces").items()) {
      const std::string where = "space '" + item.key() + "'";
      if (!item.value().is_array()) {
        throw ParseError(where + ": expected an array of labels");
      }
      std::vector<std::string> labels;
      for (const auto& l : item.value()) labels.push_back(get_string(l, where));
      doc.spaces.emplace(item.key(), std::move(labels));
    }
  }
  if (auto it = root.find("dists"); it != root.end()) {
    for (const auto& item : get_object(*it, "dists").items()) {
      const std::string where = "dist '" + item.key() + "'";
      const json& j = get_object(item.value(), where);
      check_keys(j, {"space", "probs"}, where);
      DistEntry e;
      e.space = get_string(field(j, "space", where), where + " space");
      e.probs = get_probs(field(j, "probs", where), where + " probs");
      doc.dists.emplace(item.key(), std::move(e));
    }
  }
  if (auto it = root.find("det_maps"); it != root.end()) {
    for (const auto& item : get_object(*it, "det_maps").items()) {
      const std::string where = "det_map '" + item.key() + "'";
      const json& j = get_object(item.value(), where);
      check_keys(j, {"dom", "cod", "image"}, where);
      DetMapEntry e;
      e.dom = get_string(field(j, "dom", where), where + " dom");
      e.cod = get_string(field(j, "cod", where), where + " cod");
      const json& img = get_object(field(j, "image", where), where + " image");
      for (const auto& kv : img.items()) {
        e.image.emplace(kv.key(),
                        get_string(kv.value(), where + " image '" + kv.key() + "'"));
      }
      doc.det_maps.emplace(item.key(), std::move(e));
    }
  }
  if (auto it = root.find("channels"); it != root.end()) {
    for (const auto& item : get_object(*it, "channels").items()) {
      const std::string where = "channel '" + item.key() + "'";
      const json& j = get_object(item.value(), where);
      check_keys(j, {"dom", "cod", "rows"}, where);
      ChannelEntry e;
      e.dom = get_string(field(j, "dom", where), where + " dom");
      e.cod = get_string(field(j, "cod", where), where + " cod");
      const json& rows = get_object(field(j, "rows", where), where + " rows");
      for (const auto& kv : rows.items()) {
        e.rows.emplace(kv.key(),
                       get_probs(kv.value(), where + " row '" + kv.key() + "'"));
      }
      doc.channels.emplace(item.key(), std::move(e));
    }
  }
  if (auto it = root.find("morphisms"); it != root.end()) {
    for (const auto& item : get_object(*it, "morphisms").items()) {
      const std::string where = "morphism '" + item.key() + "'";
      const json& j = get_object(item.value(), where);
      check_keys(j, {"map", "prior", "section"}, where);
      MorphismEntry e;
      e.map = get_string(field(j, "map", where), where + " map");
      e.prior = get_string(field(j, "prior", where), where + " prior");
      e.section = get_string(field(j, "section", where), where + " section");
      doc.morphisms.emplace(item.key(), std::move(e));
    }
  }
  if (auto it = root.find("two_morphisms"); it != root.end()) {
    for (const auto& item : get_object(*it, "two_morphisms").items()) {
      const std::string where = "two_morphism '" + item.key() + "'";
      const json& j = get_object(item.value(), where);
      check_keys(j, {"dom", "cod", "top", "bottom"}, where);
      TwoMorphismEntry e;
      e.dom = get_string(field(j, "dom", where), where + " dom");
      e.cod = get_string(field(j, "cod", where), where + " cod");
      e.top = get_string(field(j, "top", where), where + " top");
      e.bottom = get_string(field(j, "bottom", where), where + " bottom");
      doc.two_morphisms.emplace(item.key(), std::move(e));
    }
  }
  resolve_references(doc);
  return doc;
}

namespace detail {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string json_quote(const std::string& s) { return json(s).dump(); }

}  // namespace detail

namespace {

using detail::Emitter;

void emit_probs(Emitter& e, const std::map<std::string, double>& probs) {
  e.obj_open();
  for (const auto& [l, v] : probs) {
    e.key(l);
    e.num(v);
  }
  e.obj_close();
}

template <class Map, class Fn>
void emit_section(Emitter& e, const char* name, const Map& m, Fn&& entry) {
  if (m.empty()) return;
  e.key(name);
  e.obj_open();
  for (const auto& [n, v] : m) {
    e.key(n);
    entry(v);
  }
  e.obj_close();
}

}  // namespace

namespace detail {

void emit_document(Emitter& e, const Document& doc) {
  e.obj_open();
  emit_section(e, "channels", doc.channels, [&](const ChannelEntry& c) {
    e.obj_open();
    e.key("cod");
    e.str(c.cod);
    e.key("dom");
    e.str(c.dom);
    e.key("rows");
    e.obj_open();
    for (const auto& [in, row] : c.rows) {
      e.key(in);
      emit_probs(e, row);
    }
    e.obj_close();
    e.obj_close();
  });
  emit_section(e, "det_maps", doc.det_maps, [&](const DetMapEntry& f) {
    e.obj_open();
    e.key("cod");
    e.str(f.cod);
    e.key("dom");
    e.str(f.dom);
    e.key("image");
    e.obj_open();
    for (const auto& [from, to] : f.image) {
      e.key(from);
      e.str(to);
    }
    e.obj_close();
    e.obj_close();
  });
  emit_section(e, "dists", doc.dists, [&](const DistEntry& d) {
    e.obj_open();
    e.key("probs");
    emit_probs(e, d.probs);
    e.key("space");
    e.str(d.space);
    e.obj_close();
  });
  emit_section(e, "morphisms", doc.morphisms, [&](const MorphismEntry& m) {
    e.obj_open();
    e.key("map");
    e.str(m.map);
    e.key("prior");
    e.str(m.prior);
    e.key("section");
    e.str(m.section);
    e.obj_close();
  });
  emit_section(e, "spaces", doc.spaces,
               [&](const std::vector<std::string>& labels) {
                 e.arr_open();
                 for (const auto& l : labels) {
                   e.item();
                   e.str(l);
                 }
                 e.arr_close();
               });
  emit_section(e, "two_morphisms", doc.two_morphisms,
               [&](const TwoMorphismEntry& t) {
                 e.obj_open();
                 e.key("bottom");
                 e.str(t.bottom);
                 e.key("cod");
                 e.str(t.cod);
                 e.key("dom");
                 e.str(t.dom);
                 e.key("top");
                 e.str(t.top);
                 e.obj_close();
               });
  e.obj_close();
}

}  // namespace detail

std::string serialize_document(const Document& doc) {
  detail::Emitter e;
  detail::emit_document(e, doc);
  std::string out = e.take();
  out += '\n';
  return out;
}

namespace {

template <class Map>
const typename Map::mapped_type& entry_of(const Map& m, const std::string& name,
                                          const char* kind) {
  auto it = m.find(name);
  if (it == m.end()) {
    throw DanglingReference(std::string(kind) + " '" + name +
                            "' is not defined");
  }
  return it->second;
}

std::size_t label_index(const FinSet& s, const std::string& l,
                        const std::string& where) {
  auto idx = s.find(l);
  if (!idx) throw DanglingReference(where + ": unknown label '" + l + "'");
  return *idx;
}

}  // namespace

FinSet build_space(const Document& doc, const std::string& name) {
  return FinSet(entry_of(doc.spaces, name, "space"));
}

Dist build_dist(const Document& doc, const std::string& name) {
  const DistEntry& e = entry_of(doc.dists, name, "dist");
  FinSet space = build_space(doc, e.space);
  std::vector<double> v(space.size(), 0.0);
  for (const auto& [l, p] : e.probs) {
    v[label_index(space, l, "dist '" + name + "'")] = p;
  }
  return Dist(std::move(space), std::move(v));
}

DetMap build_det_map(const Document& doc, const std::string& name) {
  const DetMapEntry& e = entry_of(doc.det_maps, name, "det_map");
  FinSet dom = build_space(doc, e.dom);
  FinSet cod = build_space(doc, e.cod);
  std::vector<std::size_t> img(dom.size());
  for (std::size_t x = 0; x < dom.size(); ++x) {
    auto it = e.image.find(dom.label(x));
    if (it == e.image.end()) {
      throw ParseError("det_map '" + name + "': no image for label '" +
                       dom.label(x) + "'");
    }
    img[x] = label_index(cod, it->second, "det_map '" + name + "'");
  }
  return DetMap(std::move(dom), std::move(cod), std::move(img));
}

Channel build_channel(const Document& doc, const std::string& name) {
  const ChannelEntry& e = entry_of(doc.channels, name, "channel");
  FinSet dom = build_space(doc, e.dom);
  FinSet cod = build_space(doc, e.cod);
  std::vector<double> entries(dom.size() * cod.size(), 0.0);
  const std::string where = "channel '" + name + "'";
  for (const auto& [in, row] : e.rows) {
    const std::size_t x = label_index(dom, in, where);
    for (const auto& [out, v] : row) {
      entries[x * cod.size() + label_index(cod, out, where)] = v;
    }
  }
  return Channel(std::move(dom), std::move(cod), std::move(entries));
}

StatMorphism build_morphism(const Document& doc, const std::string& name,
                            double tol) {
  const MorphismEntry& e = entry_of(doc.morphisms, name, "morphism");
  return StatMorphism::make(build_det_map(doc, e.map),
                            build_dist(doc, e.prior),
                            build_channel(doc, e.section), tol);
}

TwoMorphism build_two_morphism(const Document& doc, const std::string& name,
                               double tol) {
  const TwoMorphismEntry& e = entry_of(doc.two_morphisms, name, "two_morphism");
  return TwoMorphism::make(build_morphism(doc, e.dom, tol),
                           build_morphism(doc, e.cod, tol),
                           build_channel(doc, e.top),
                           build_channel(doc, e.bottom), tol);
}

bool ValidationReport::all_ok() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const ValidationRow& r) { return r.ok; });
}

namespace {

// Raw mass residual of one probability map: how far the total is from 1,
// and how negative any entry goes.
double mass_residual(const std::map<std::string, double>& probs) {
  double sum = 0.0;
  double neg = 0.0;
  for (const auto& [l, v] : probs) {
    (void)l;
    sum += v;
    neg = std::max(neg, -v);
  }
  return std::max(std::fabs(sum - 1.0), neg);
}

}  // namespace

ValidationReport validate_document(const Document& doc, double tol) {
  ValidationReport rep;
  auto row = [&rep](const char* kind, const std::string& name, auto&& fn) {
    ValidationRow r;
    r.kind = kind;
    r.name = name;
    try {
      fn(r);
      r.ok = true;
    } catch (const std::exception& ex) {
      r.message = ex.what();
    }
    rep.rows.push_back(std::move(r));
  };

  for (const auto& [name, labels] : doc.spaces) {
    (void)labels;
    row("space", name, [&](ValidationRow&) { build_space(doc, name); });
  }
  for (const auto& [name, e] : doc.dists) {
    row("dist", name, [&](ValidationRow& r) {
      r.violation = mass_residual(e.probs);
      build_dist(doc, name);
    });
  }
  for (const auto& [name, e] : doc.det_maps) {
    (void)e;
    row("det_map", name, [&](ValidationRow&) { build_det_map(doc, name); });
  }
  for (const auto& [name, e] : doc.channels) {
    row("channel", name, [&](ValidationRow& r) {
      if (auto it = doc.spaces.find(e.dom); it != doc.spaces.end()) {
        static const std::map<std::string, double> kEmpty;
        for (const auto& l : it->second) {
          auto rit = e.rows.find(l);
          r.violation = std::max(
              r.violation,
              mass_residual(rit == e.rows.end() ? kEmpty : rit->second));
        }
      }
      build_channel(doc, name);
    });
  }
  for (const auto& [name, e] : doc.morphisms) {
    row("morphism", name, [&](ValidationRow& r) {
      DetMap f = build_det_map(doc, e.map);
      Dist p = build_dist(doc, e.prior);
      Channel s = build_channel(doc, e.section);
      r.violation = section_violation(s, f);
      if (p.space() != f.dom()) {
        throw SpaceMismatch("morphism '" + name +
                            "': prior space differs from map domain");
      }
      StatMorphism::make(std::move(f), std::move(p), std::move(s), tol);
    });
  }
  for (const auto& [name, e] : doc.two_morphisms) {
    row("two_morphism", name, [&](ValidationRow& r) {
      StatMorphism dom = build_morphism(doc, e.dom, tol);
      StatMorphism cod = build_morphism(doc, e.cod, tol);
      Channel top = build_channel(doc, e.top);
      Channel bottom = build_channel(doc, e.bottom);
      const double v1 = max_abs_diff(apply(top, dom.prior()), cod.prior());
      const double v2 =
          max_abs_diff(apply(bottom, dom.pushforward()), cod.pushforward());
      const double v3 = max_abs_diff(compose(lift(cod.map()), top),
                                     compose(bottom, lift(dom.map())));
      r.violation = std::max({v1, v2, v3});
      TwoMorphism::make(std::move(dom), std::move(cod), std::move(top),
                        std::move(bottom), tol);
    });
  }
  return rep;
}

namespace {

template <class Map>
std::string unique_name(const Map& m, const std::string& hint) {
  if (!m.contains(hint)) return hint;
  for (int i = 2;; ++i) {
    std::string cand = hint + std::to_string(i);
    if (!m.contains(cand)) return cand;
  }
}

template <class Map, class Entry>
std::string insert_entry(Map& m, const std::string& hint, Entry e) {
  for (const auto& [n, v] : m) {
    if (v == e) return n;
  }
  std::string name = unique_name(m, hint);
  m.emplace(name, std::move(e));
  return name;
}

std::map<std::string, double> probs_of(const FinSet& space,
                                       const std::vector<double>& v) {
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) out.emplace(space.label(i), v[i]);
  }
  return out;
}

}  // namespace

std::string ensure_space(Document& doc, const FinSet& s,
                         const std::string& hint) {
  return insert_entry(doc.spaces, hint, s.labels());
}

std::string add_dist(Document& doc, const std::string& hint, const Dist& d) {
  DistEntry e;
  e.space = ensure_space(doc, d.space(), "S");
  e.probs = probs_of(d.space(), d.probs());
  return insert_entry(doc.dists, hint, std::move(e));
}

std::string add_det_map(Document& doc, const std::string& hint,
                        const DetMap& f) {
  DetMapEntry e;
  e.dom = ensure_space(doc, f.dom(), "S");
  e.cod = ensure_space(doc, f.cod(), "S");
  for (std::size_t x = 0; x < f.dom().size(); ++x) {
    e.image.emplace(f.dom().label(x), f.cod().label(f(x)));
  }
  return insert_entry(doc.det_maps, hint, std::move(e));
}

std::string add_channel(Document& doc, const std::string& hint,
                        const Channel& c) {
  ChannelEntry e;
  e.dom = ensure_space(doc, c.dom(), "S");
  e.cod = ensure_space(doc, c.cod(), "S");
  for (std::size_t x = 0; x < c.dom().size(); ++x) {
    auto row = c.row(x);
    auto probs = probs_of(c.cod(), {row.begin(), row.end()});
    if (!probs.empty()) e.rows.emplace(c.dom().label(x), std::move(probs));
  }
  return insert_entry(doc.channels, hint, std::move(e));
}

std::string add_morphism(Document& doc, const std::string& hint,
                         const StatMorphism& m) {
  MorphismEntry e;
  e.map = add_det_map(doc, hint + "_map", m.map());
  e.prior = add_dist(doc, hint + "_prior", m.prior());
  e.section = add_channel(doc, hint + "_section", m.section());
  return insert_entry(doc.morphisms, hint, std::move(e));
}

std::string add_two_morphism(Document& doc, const std::string& hint,
                             const TwoMorphism& sq) {
  TwoMorphismEntry e;
  e.dom = add_morphism(doc, hint + "_dom", sq.dom());
  e.cod = add_morphism(doc, hint + "_cod", sq.cod());
  e.top = add_channel(doc, hint + "_top", sq.top());
  e.bottom = add_channel(doc, hint + "_bottom", sq.bottom());
  return insert_entry(doc.two_morphisms, hint, std::move(e));
}

}  // namespace finstat
