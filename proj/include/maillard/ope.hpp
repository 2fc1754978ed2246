#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maillard/env.hpp"
#include "maillard/policy.hpp"

namespace maillard {

/// One logged decision. `arm` is 0-based in memory and 1-based on disk.
struct LogRecord {
  std::uint64_t step = 0;  // 1-based decision time
  std::size_t arm = 0;
  double reward = 0.0;
  double propensity = 1.0;  // exact probability of `arm`; 1 for forced pulls

  bool operator==(const LogRecord&) const = default;
};

// Runs `policy` for `horizon` steps and records the exact propensity of every
// chosen arm. Throws std::invalid_argument if the policy has no closed-form
// distribution.
std::vector<LogRecord> log_run(const Policy& policy, const BanditInstance& instance,
                               std::uint64_t horizon, std::uint64_t seed);

struct IpsEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t records = 0;
};

// Inverse propensity estimate of the per-step reward of a stationary target
// distribution. Records with step <= K are forced pulls and are skipped.
IpsEstimate ips_value(std::span<const LogRecord> log, const ActionDistribution& target);

struct PropensityEstimate {
  ActionDistribution frequencies;
  std::size_t samples = 0;

  // Lower bound used when an estimate serves as an IPS denominator.
  double floor() const { return 1.0 / (2.0 * static_cast<double>(samples)); }
  double denominator(std::size_t arm) const;
};

// Empirical action frequencies of `policy` over `samples` independent draws
// from the fixed `state`.
PropensityEstimate mc_propensity(const Policy& policy, const PolicyState& state,
                                 std::size_t samples, RandomStream& rng);

std::string log_to_csv(std::span<const LogRecord> log);
std::vector<LogRecord> log_from_csv(std::string_view text);
std::string log_to_jsonl(std::span<const LogRecord> log);

}  // namespace maillard
