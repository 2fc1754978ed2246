#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "maillard/env.hpp"
#include "maillard/policy.hpp"

namespace maillard {

struct ExperimentConfig {
  ProblemSpec problem;
  std::string policy_id = "ms";
  PolicyConfig policy;  // horizon is filled in from `horizon` for fixed-budget policies
  std::uint64_t horizon = 20000;
  std::size_t trials = 200;
  std::uint64_t base_seed = 1;
  std::size_t trajectory_stride = 100;  // 0 keeps no trajectory

  // Throws std::invalid_argument unless T > K and trials >= 1.
  void validate() const;
};

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double final_regret = 0.0;
  std::vector<double> trajectory;  // cumulative pseudo-regret at trajectory_steps()
  std::vector<std::uint64_t> pulls;
};

struct ExperimentSummary {
  ExperimentConfig config;
  std::string label;
  double mean = 0.0;
  double std = 0.0;  // n - 1 denominator; 0 for a single trial
  double max = 0.0;
  std::size_t trials = 0;
};

// Steps at which trajectories are sampled: stride, 2 stride, ..., and T.
std::vector<std::uint64_t> trajectory_steps(std::uint64_t horizon, std::size_t stride);

// One trial: round-robin initialization, then select / pull / update until T.
// Pseudo-regret accumulates the true gap of each pulled arm. The stream is
// seeded with derive_seed(base_seed, trial_index).
TrialResult run_trial(const BanditInstance& instance, const Policy& policy,
                      const ExperimentConfig& config, std::size_t trial_index);
TrialResult run_trial(const ExperimentConfig& config, std::size_t trial_index);

// 0 means one worker per hardware thread.
std::size_t resolve_threads(std::size_t requested);

// Reads BANDIT_THREADS; unset or unparsable yields 0 (auto).
std::size_t threads_from_env();

// Calls body(i) for i in [0, n) on up to `threads` workers. The first
// exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

std::vector<TrialResult> run_trials(const ExperimentConfig& config, std::size_t threads = 0);
ExperimentSummary summarize(const ExperimentConfig& config, std::span<const TrialResult> trials);
ExperimentSummary run_experiment(const ExperimentConfig& config, std::size_t threads = 0);
std::vector<ExperimentSummary> sweep(std::span<const ExperimentConfig> grid,
                                     std::size_t threads = 0);

std::string summaries_to_csv(std::span<const ExperimentSummary> summaries);
std::string summaries_to_json(std::span<const ExperimentSummary> summaries);
std::string trials_to_csv(std::span<const TrialResult> trials);
std::string trajectories_to_csv(std::span<const TrialResult> trials, std::uint64_t horizon,
                                std::size_t stride);

}  // namespace maillard
