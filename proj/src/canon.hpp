#pragma once

#include <string>
#include <vector>

namespace finstat {
struct Document;
struct SuiteReport;
}  // namespace finstat

namespace finstat::detail {

// %.15g: enough digits that decimal -> double -> decimal is the identity,
// few enough that double -> decimal -> double printed again is stable, so
// canonical text is a fixed point of parse ∘ serialize.
std::string fmt_double(double v);

std::string json_quote(const std::string& s);

// Canonical pretty-printer: two-space indent, sorted keys are the caller's
// job (iterate std::map), every element on its own line, {} / [] inline.
class Emitter {
 public:
  std::string take() { return std::move(out_); }

  void obj_open() {
    out_ += '{';
    ++depth_;
    first_.push_back(true);
  }
  void obj_close() { close('}'); }
  void arr_open() {
    out_ += '[';
    ++depth_;
    first_.push_back(true);
  }
  void arr_close() { close(']'); }

  void key(const std::string& k) {
    item();
    out_ += json_quote(k);
    out_ += ": ";
  }
  void str(const std::string& s) { out_ += json_quote(s); }
  void num(double v) { out_ += fmt_double(v); }
  void raw(const std::string& s) { out_ += s; }

  // Prefix for the next array element or object key.
  void item() {
    if (!first_.back()) out_ += ',';
    first_.back() = false;
    newline();
  }

 private:
  void close(char c) {
    --depth_;
    if (!first_.back()) newline();
    first_.pop_back();
    out_ += c;
  }
  void newline() {
    out_ += '\n';
    out_.append(2 * depth_, ' ');
  }

  std::string out_;
  int depth_ = 0;
  std::vector<bool> first_ = {true};
};

// Defined in document.cpp.
void emit_document(Emitter& e, const Document& doc);

// Defined in harness.cpp.
void emit_report(Emitter& e, const SuiteReport& rep);

}  // namespace finstat::detail
