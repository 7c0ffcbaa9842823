#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finstat/document.hpp"
#include "finstat/randgen.hpp"

namespace finstat {

struct ProbeStats {
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t trials = 0;
  std::uint64_t passes = 0;
  // Worst violation over all trials; infinite when some trial had exactly
  // one side of an identity infinite.
  ExtReal max_violation = 0.0;
  // Failing instances (probe suites: notable instances), at most five,
  // smallest first. Non-empty iff passes < trials, probe aside.
  std::vector<Document> counterexamples;
  GenConfig config;
  double tol = 0.0;
  // Present for report-only suites: distribution of the probed quantity.
  std::optional<ProbeStats> probe;
  // Informational; never serialized, so reports stay byte-identical.
  double elapsed_seconds = 0.0;
};

// Registered suite names, in registry order ("all" runs them in this order).
std::vector<std::string> suite_names();

struct HarnessOptions {
  // Testing hook: adds 1.0 to the named trial's computed violation, forcing
  // one failure that must surface as passes = trials - 1 plus a serialized
  // counterexample.
  std::optional<std::uint64_t> inject_fault_at;
};

// Runs one suite. Deterministic in (name, trials, cfg, tol): every trial
// derives its own sub-seed from (suite name, trial index, cfg.seed), so the
// report cannot depend on execution order. Throws UnknownSuite.
SuiteReport run_suite(const std::string& name, std::uint64_t trials,
                      const GenConfig& cfg, double tol = 1e-8,
                      const HarnessOptions& opts = {});

// Canonical JSON: sorted keys, %.15g numbers, "inf" for the infinite
// max_violation. Trailing newline.
std::string serialize_report(const SuiteReport& rep);

// Several reports as one canonical JSON array (the `check all` output).
std::string serialize_reports(const std::vector<SuiteReport>& reps);

}  // namespace finstat
