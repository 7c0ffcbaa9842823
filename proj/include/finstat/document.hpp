#pragma once

#include <map>
#include <string>
#include <vector>

#include "finstat/two_morphism.hpp"

namespace finstat {

// Declarative instance file, raw form. Six sections, each a name -> entry
// map; entries reference earlier sections by name, so the reference graph is
// acyclic by construction. Probabilities are keyed by label with exact
// zeros omitted (parse drops them, serialize never writes them).
struct DistEntry {
  std::string space;
  std::map<std::string, double> probs;
  bool operator==(const DistEntry&) const = default;
};

struct DetMapEntry {
  std::string dom;
  std::string cod;
  std::map<std::string, std::string> image;  // dom label -> cod label, total
  bool operator==(const DetMapEntry&) const = default;
};

struct ChannelEntry {
  std::string dom;
  std::string cod;
  // rows[input label][output label] = P(output | input); missing row = all 0.
  std::map<std::string, std::map<std::string, double>> rows;
  bool operator==(const ChannelEntry&) const = default;
};

struct MorphismEntry {
  std::string map;      // det_map name
  std::string prior;    // dist name
  std::string section;  // channel name
  bool operator==(const MorphismEntry&) const = default;
};

struct TwoMorphismEntry {
  std::string dom;     // morphism name (left leg)
  std::string cod;     // morphism name (right leg)
  std::string top;     // channel name
  std::string bottom;  // channel name
  bool operator==(const TwoMorphismEntry&) const = default;
};

struct Document {
  std::map<std::string, std::vector<std::string>> spaces;
  std::map<std::string, DistEntry> dists;
  std::map<std::string, DetMapEntry> det_maps;
  std::map<std::string, ChannelEntry> channels;
  std::map<std::string, MorphismEntry> morphisms;
  std::map<std::string, TwoMorphismEntry> two_morphisms;
  bool operator==(const Document&) const = default;
};

// JSON in, structurally valid Document out. Throws ParseError (malformed
// text, wrong shapes, non-total det_map images), DuplicateName (repeated key
// inside any object), DanglingReference (names or labels that do not
// resolve). Semantic validation is validate_document below.
Document parse_document(const std::string& text);

// Canonical form: sorted keys, two-space indent, %.15g numbers, zero
// entries omitted, trailing newline. A fixed point of parse ∘ serialize.
std::string serialize_document(const Document& doc);

// Builders resolve one named entry (and its dependencies) into a value.
// Throw DanglingReference for missing names plus whatever the underlying
// constructors throw.
FinSet build_space(const Document& doc, const std::string& name);
Dist build_dist(const Document& doc, const std::string& name);
DetMap build_det_map(const Document& doc, const std::string& name);
Channel build_channel(const Document& doc, const std::string& name);
StatMorphism build_morphism(const Document& doc, const std::string& name,
                            double tol = kEqTol);
TwoMorphism build_two_morphism(const Document& doc, const std::string& name,
                               double tol = kEqTol);

struct ValidationRow {
  std::string kind;
  std::string name;
  double violation = 0.0;  // worst residual of the entry's own constraints
  bool ok = false;
  std::string message;  // empty when ok
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  bool all_ok() const;
};

// Tries to build every entry, in section order, recording the worst
// constraint residual per entry. Mass constraints are judged by the
// constructors (kStochasticTol); relational constraints use tol.
ValidationReport validate_document(const Document& doc, double tol = kEqTol);

// Insert helpers used when emitting composed or generated objects. Values
// equal to an existing entry reuse its name; otherwise the hint is taken,
// uniquified with a numeric suffix if needed. All return the final name.
std::string ensure_space(Document& doc, const FinSet& s,
                         const std::string& hint);
std::string add_dist(Document& doc, const std::string& hint, const Dist& d);
std::string add_det_map(Document& doc, const std::string& hint,
                        const DetMap& f);
std::string add_channel(Document& doc, const std::string& hint,
                        const Channel& c);
std::string add_morphism(Document& doc, const std::string& hint,
                         const StatMorphism& m);
std::string add_two_morphism(Document& doc, const std::string& hint,
                             const TwoMorphism& sq);

}  // namespace finstat
