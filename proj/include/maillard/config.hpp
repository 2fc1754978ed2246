#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "maillard/bounds.hpp"
#include "maillard/env.hpp"
#include "maillard/policy.hpp"

namespace maillard {

/// Bad configuration. The message carries the source location and field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat INI document: `[section]` headers, `key = value` lines, `#` or `;`
/// comments. Remembers the line of every key for diagnostics.
class IniDocument {
 public:
  struct Entry {
    std::string value;
    std::size_t line = 0;  // 0 for command-line overrides
  };

  static IniDocument parse(std::string_view text, std::string source = "<config>");
  static IniDocument load(const std::filesystem::path& path);

  // `dotted` is "section.key".
  void set(std::string_view dotted, std::string value);

  const Entry* find(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;
  std::vector<std::string> keys() const;  // "section.key", sorted

  // Location prefix for a diagnostic about `section.key`.
  std::string where(const std::string& section, const std::string& key) const;

 private:
  std::string source_;
  std::map<std::string, Entry> entries_;  // keyed by "section.key"
};

enum class Command { Run, SweepBooster, Ope, Bounds };

// Target distribution for off-policy evaluation: a point mass on one arm
// (configured 1-based) or the uniform distribution.
struct OpeTarget {
  std::string name;
  std::optional<std::size_t> arm;  // 0-based; empty means uniform
};

struct RunSpec {
  ProblemSpec problem;
  std::vector<std::string> policy_ids;
  PolicyConfig policy;
  std::uint64_t horizon = 20000;
  std::size_t trials = 200;
  std::uint64_t base_seed = 1;
  std::size_t trajectory_stride = 100;
  bool per_trial_csv = false;
  bool trajectories = false;
  bool svg = true;
  std::filesystem::path output_dir = "out";
  std::size_t threads = 0;

  std::vector<double> boosters;

  std::string ope_logger = "ms";
  std::vector<OpeTarget> ope_targets;
  std::size_t ope_logs = 200;
  std::uint64_t ope_horizon = 2000;
  std::size_t mc_samples = 10000;
  std::size_t timing_decisions = 50;

  double bounds_c = 0.1;
  LogDenominator bounds_denominator = LogDenominator::TwoSigma2;
};

const std::vector<std::string>& default_policy_ids();

// Validates every field for `command` and fills defaults. Throws ConfigError.
RunSpec parse_run_spec(const IniDocument& doc, Command command);

}  // namespace maillard
