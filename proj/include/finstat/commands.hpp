#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "finstat/harness.hpp"

namespace finstat {

// Command bodies behind the CLI, separated so tests can drive them without
// a process boundary. All return the process exit code: 0 success,
// 1 semantic validation failure, 2 parse or usage error. Diagnostics go to
// err, results to out.

// Parses the file and prints one row per object with its worst violation.
int cmd_validate(const std::string& path, double tol, std::ostream& out,
                 std::ostream& err);

// kind: kl (needs `against`), re, ce, re2. Prints the value in the chosen
// base: "0" for an exact zero, "inf" for infinity, 12 significant digits
// otherwise.
int cmd_entropy(const std::string& path, const std::string& kind,
                const std::string& target, const std::string& against,
                LogBase base, double tol, std::ostream& out,
                std::ostream& err);

// result = left ∘ right (left applied after right). mode: channel,
// morphism, vertical, horizontal. Writes the input document extended with
// the composite under out_name.
int cmd_compose(const std::string& path, const std::string& mode,
                const std::string& left, const std::string& right,
                const std::string& out_name, double tol, std::ostream& out,
                std::ostream& err);

// Runs one suite (or "all") and writes the canonical report(s) to out;
// progress and timing go to err. Exit 1 when a non-probe suite fails.
int cmd_check(const std::string& suite, std::uint64_t trials,
              const GenConfig& cfg, double tol, std::ostream& out,
              std::ostream& err);

// kind: dist, channel, morphism, two_morphism, stacked_pair. Writes a
// fresh document drawn from cfg.
int cmd_generate(const std::string& kind, const GenConfig& cfg,
                 std::ostream& out, std::ostream& err);

}  // namespace finstat
