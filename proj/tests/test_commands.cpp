#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "finstat/commands.hpp"
#include "finstat/document.hpp"
#include "finstat/two_morphism.hpp"

using namespace finstat;

namespace {

std::string scratch_file(const std::string& stem, const std::string& text) {
  std::string path =
      (std::filesystem::temp_directory_path() / (stem + ".json")).string();
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

// Stack whose vertical composite is bitwise equal to its upper square: the
// lower square is the trivial identity square on the singleton both upper
// legs collapse to, so every composed component dedups against upper's.
Document degenerate_stack() {
  const FinSet X({"a", "b"});
  const FinSet Y({"c", "d"});
  const FinSet U({"u"});
  StatMorphism dom = StatMorphism::make(DetMap(X, U, {0, 0}),
                                        Dist(X, {0.75, 0.25}),
                                        Channel(U, X, {0.5, 0.5}));
  Channel top(X, Y, {0.3, 0.7, 0.6, 0.4});
  StatMorphism cod = StatMorphism::make(DetMap(Y, U, {0, 0}),
                                        apply(top, dom.prior()),
                                        Channel(U, Y, {0.2, 0.8}));
  TwoMorphism upper =
      TwoMorphism::make(dom, cod, top, Channel::identity(U));
  StatMorphism unit = StatMorphism::make(DetMap::identity(U), Dist(U, {1.0}),
                                         Channel::identity(U));
  TwoMorphism lower = TwoMorphism::make(unit, unit, Channel::identity(U),
                                        Channel::identity(U));
  Document doc;
  add_two_morphism(doc, "upper", upper);
  add_two_morphism(doc, "lower", lower);
  return doc;
}

}  // namespace

TEST_CASE("compose binds the requested name even when the composite dedups") {
  const std::string path =
      scratch_file("cmd_compose_dedup", serialize_document(degenerate_stack()));
  std::ostringstream out, err;
  const int rc = cmd_compose(path, "vertical", "lower", "upper", "tall",
                             kEqTol, out, err);
  CHECK(rc == 0);
  CHECK(err.str().empty());
  Document got = parse_document(out.str());
  REQUIRE(got.two_morphisms.contains("tall"));
  // The composite collapses to the upper square; the name must still bind.
  CHECK(got.two_morphisms.at("tall") == got.two_morphisms.at("upper"));
  TwoMorphism tall = build_two_morphism(got, "tall");
  TwoMorphism upper = build_two_morphism(got, "upper");
  CHECK(relative_entropy(tall) == relative_entropy(upper));
}

TEST_CASE("compose rejects an output name that is already defined") {
  const std::string path =
      scratch_file("cmd_compose_taken", serialize_document(degenerate_stack()));
  std::ostringstream out, err;
  const int rc = cmd_compose(path, "vertical", "lower", "upper", "upper",
                             kEqTol, out, err);
  CHECK(rc == 2);
  CHECK(out.str().empty());
  CHECK(err.str().find("already defined") != std::string::npos);
}

TEST_CASE("compose adds a genuinely new composite under the requested name") {
  const std::string path =
      scratch_file("cmd_compose_fresh", serialize_document(degenerate_stack()));
  std::ostringstream out, err;
  // Channel mode: upper_top after upper_dom_section is a new channel U ⇝ Y.
  const int rc = cmd_compose(path, "channel", "upper_top",
                             "upper_dom_section", "push", kEqTol, out, err);
  CHECK(rc == 0);
  Document got = parse_document(out.str());
  REQUIRE(got.channels.contains("push"));
  Channel push = build_channel(got, "push");
  CHECK(push.dom().size() == 1);
  CHECK(push.at(0, 0) == doctest::Approx(0.45).epsilon(1e-15));
  CHECK(push.at(0, 1) == doctest::Approx(0.55).epsilon(1e-15));
}
