#include <doctest.h>

#include "finstat/document.hpp"
#include "finstat/errors.hpp"
#include "finstat/randgen.hpp"

using namespace finstat;

namespace {

// Hand document: collapse of a two-point space with a fair section.
const char* kSmall = R"({
  "spaces": {"X": ["a", "b"], "Y": ["u"]},
  "dists": {"p": {"probs": {"a": 0.75, "b": 0.25}, "space": "X"}},
  "det_maps": {"f": {"cod": "Y", "dom": "X", "image": {"a": "u", "b": "u"}}},
  "channels": {"s": {"cod": "X", "dom": "Y", "rows": {"u": {"a": 0.5, "b": 0.5}}}},
  "morphisms": {"m": {"map": "f", "prior": "p", "section": "s"}}
})";

}  // namespace

TEST_CASE("parse and build the small document") {
  Document doc = parse_document(kSmall);
  REQUIRE(doc.spaces.size() == 2);
  CHECK(doc.spaces.at("X") == std::vector<std::string>{"a", "b"});
  CHECK(build_space(doc, "Y").size() == 1);
  CHECK(build_dist(doc, "p") == Dist(build_space(doc, "X"), {0.75, 0.25}));
  CHECK(build_det_map(doc, "f").surjective());
  CHECK(build_channel(doc, "s").at(0, 1) == 0.5);
  StatMorphism m = build_morphism(doc, "m");
  CHECK(relative_entropy(m).value() ==
        doctest::Approx(0.130812035941137).epsilon(1e-12));
}

TEST_CASE("serialization is canonical and a fixed point") {
  Document doc = parse_document(kSmall);
  std::string text = serialize_document(doc);
  CHECK(parse_document(text) == doc);
  CHECK(serialize_document(parse_document(text)) == text);
  // Key order inside the output is sorted, independent of input order.
  std::string golden =
      "{\n"
      "  \"channels\": {\n"
      "    \"s\": {\n"
      "      \"cod\": \"X\",\n"
      "      \"dom\": \"Y\",\n"
      "      \"rows\": {\n"
      "        \"u\": {\n"
      "          \"a\": 0.5,\n"
      "          \"b\": 0.5\n"
      "        }\n"
      "      }\n"
      "    }\n"
      "  },\n"
      "  \"det_maps\": {\n"
      "    \"f\": {\n"
      "      \"cod\": \"Y\",\n"
      "      \"dom\": \"X\",\n"
      "      \"image\": {\n"
      "        \"a\": \"u\",\n"
      "        \"b\": \"u\"\n"
      "      }\n"
      "    }\n"
      "  },\n"
      "  \"dists\": {\n"
      "    \"p\": {\n"
      "      \"probs\": {\n"
      "        \"a\": 0.75,\n"
      "        \"b\": 0.25\n"
      "      },\n"
      "      \"space\": \"X\"\n"
      "    }\n"
      "  },\n"
      "  \"morphisms\": {\n"
      "    \"m\": {\n"
      "      \"map\": \"f\",\n"
      "      \"prior\": \"p\",\n"
      "      \"section\": \"s\"\n"
      "    }\n"
      "  },\n"
      "  \"spaces\": {\n"
      "    \"X\": [\n"
      "      \"a\",\n"
      "      \"b\"\n"
      "    ],\n"
      "    \"Y\": [\n"
      "      \"u\"\n"
      "    ]\n"
      "  }\n"
      "}\n";
  CHECK(text == golden);
}

TEST_CASE("non-terminating decimals still reach a string fixed point") {
  Document doc;
  doc.spaces["S"] = {"a", "b", "c"};
  doc.dists["p"] = DistEntry{
      "S", {{"a", 1.0 / 3.0}, {"b", 1.0 / 3.0}, {"c", 1.0 - 2.0 / 3.0}}};
  std::string once = serialize_document(doc);
  std::string twice = serialize_document(parse_document(once));
  CHECK(once == twice);
  CHECK_NOTHROW(build_dist(parse_document(once), "p"));  // mass still fine
}

TEST_CASE("zero entries vanish at parse time") {
  Document doc = parse_document(R"({
    "spaces": {"X": ["a", "b"]},
    "dists": {"p": {"probs": {"a": 1.0, "b": 0.0}, "space": "X"}}
  })");
  CHECK(doc.dists.at("p").probs.size() == 1);
  CHECK(build_dist(doc, "p")[1] == 0.0);
}

TEST_CASE("parse failures carry the right exception type") {
  CHECK_THROWS_AS(parse_document("{"), ParseError);
  CHECK_THROWS_AS(parse_document("[1, 2]"), ParseError);
  CHECK_THROWS_AS(parse_document(R"({"spices": {}})"), ParseError);
  CHECK_THROWS_AS(parse_document(R"({"spaces": {"X": "ab"}})"), ParseError);
  CHECK_THROWS_AS(
      parse_document(
          R"({"spaces": {"X": ["a"]},
              "dists": {"p": {"probs": {"a": 1}, "space": "X", "e":1}}})"),
      ParseError);
  CHECK_THROWS_AS(
      parse_document(
          R"({"spaces": {"X": ["a"]},
              "dists": {"p": {"probs": {"a": "x"}, "space": "X"}}})"),
      ParseError);
  // Non-total det_map image.
  CHECK_THROWS_AS(
      parse_document(
          R"({"spaces": {"X": ["a", "b"], "Y": ["u"]},
              "det_maps": {"f": {"dom": "X", "cod": "Y",
                                 "image": {"a": "u"}}}})"),
      ParseError);
  // Duplicate key inside one object.
  CHECK_THROWS_AS(
      parse_document(R"({"spaces": {"X": ["a"], "X": ["b"]}})"),
      DuplicateName);
  // Dangling references of each flavor.
  CHECK_THROWS_AS(
      parse_document(R"({"dists": {"p": {"probs": {}, "space": "X"}}})"),
      DanglingReference);
  CHECK_THROWS_AS(
      parse_document(
          R"({"spaces": {"X": ["a"]},
              "dists": {"p": {"probs": {"zz": 1}, "space": "X"}}})"),
      DanglingReference);
  CHECK_THROWS_AS(
      parse_document(
          R"({"spaces": {"X": ["a"]},
              "morphisms": {"m": {"map": "f", "prior": "p", "section": "s"}}})"),
      DanglingReference);
  // Duplicate labels inside a space surface at build time.
  Document doc = parse_document(R"({"spaces": {"X": ["a", "a"]}})");
  CHECK_THROWS_AS(build_space(doc, "X"), DuplicateName);
  CHECK_THROWS_AS(build_space(doc, "nope"), DanglingReference);
}

TEST_CASE("validate_document reports per-entry residuals") {
  Document good = parse_document(kSmall);
  ValidationReport rep = validate_document(good);
  CHECK(rep.all_ok());
  CHECK(rep.rows.size() == 6);
  for (const auto& row : rep.rows) {
    CHECK(row.ok);
    CHECK(row.message.empty());
    CHECK(row.violation <= 1e-12);
  }

  Document bad = parse_document(R"({
    "spaces": {"X": ["a", "b"]},
    "dists": {"p": {"probs": {"a": 0.9, "b": 0.4}, "space": "X"}}
  })");
  ValidationReport brep = validate_document(bad);
  CHECK(!brep.all_ok());
  REQUIRE(brep.rows.size() == 2);
  CHECK(brep.rows[0].ok);  // the space itself is fine
  CHECK(!brep.rows[1].ok);
  CHECK(brep.rows[1].violation == doctest::Approx(0.3));
  CHECK(!brep.rows[1].message.empty());
}

TEST_CASE("add helpers dedupe values and uniquify names") {
  Document doc;
  FinSet x = make_space(3);
  std::string n1 = ensure_space(doc, x, "X");
  std::string n2 = ensure_space(doc, x, "anything");  // same value: same name
  CHECK(n1 == "X");
  CHECK(n2 == "X");
  FinSet y({"different"});
  CHECK(ensure_space(doc, y, "X") == "X2");

  Dist d(x, {0.2, 0.3, 0.5});
  std::string dn = add_dist(doc, "p", d);
  CHECK(add_dist(doc, "p", d) == dn);
  Dist d2(x, {0.5, 0.3, 0.2});
  CHECK(add_dist(doc, "p", d2) != dn);
  CHECK(build_dist(doc, dn) == d);

  GenConfig cfg;
  TwoMorphism sq = random_two_morphism(cfg);
  std::string sname = add_two_morphism(doc, "sq", sq);
  TwoMorphism back = build_two_morphism(doc, sname);
  CHECK(back.top() == sq.top());
  CHECK(back.dom().prior() == sq.dom().prior());
  std::string text = serialize_document(doc);
  CHECK(serialize_document(parse_document(text)) == text);
}
