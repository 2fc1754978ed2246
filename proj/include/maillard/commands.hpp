#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "maillard/bounds.hpp"
#include "maillard/config.hpp"
#include "maillard/harness.hpp"
#include "maillard/ope.hpp"

namespace maillard {

// Each command writes its artifacts under spec.output_dir and a short report
// to `out`. Runtime failures throw; run_cli maps them to exit codes.

// summary.csv, summary.json, regret.svg, and optionally per-trial CSVs.
std::vector<ExperimentSummary> cmd_run(const RunSpec& spec, std::ostream& out);

// booster.csv (B, mean, std, max) and booster.svg.
std::vector<ExperimentSummary> cmd_sweep_booster(const RunSpec& spec, std::ostream& out);

struct OpeRow {
  std::string target;
  double truth = 0.0;
  double estimate = 0.0;  // mean IPS over logs
  double standard_error = 0.0;
  std::size_t logs = 0;
};

struct OpeReport {
  std::vector<OpeRow> rows;
  double closed_form_seconds = 0.0;  // per decision
  double monte_carlo_seconds = 0.0;  // per decision, TS with spec.mc_samples draws
};

// ope.csv, ope.json, log.csv, log.jsonl. Timing goes to `out` only, so every
// file stays deterministic.
OpeReport cmd_ope(const RunSpec& spec, std::ostream& out);

// bounds.json and bounds.csv; the JSON is echoed to `out`.
BoundReport cmd_bounds(const RunSpec& spec, std::ostream& out);

// Entry point. args excludes the program name. Exit codes: 0 success,
// 1 runtime failure, 2 configuration error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace maillard
