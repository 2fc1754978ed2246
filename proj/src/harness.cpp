#include "maillard/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "maillard/format.hpp"

namespace maillard {

namespace {

PolicyConfig effective_policy_config(const ExperimentConfig& config) {
  PolicyConfig pc = config.policy;
  if (!pc.horizon) pc.horizon = config.horizon;
  return pc;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (horizon <= problem.num_arms)
    throw std::invalid_argument("experiment horizon T must exceed K");
  if (trials < 1) throw std::invalid_argument("experiment needs at least one trial");
}

std::vector<std::uint64_t> trajectory_steps(std::uint64_t horizon, std::size_t stride) {
  std::vector<std::uint64_t> steps;
  if (stride == 0) return steps;
  for (std::uint64_t t = stride; t <= horizon; t += stride) steps.push_back(t);
  if (steps.empty() || steps.back() != horizon) steps.push_back(horizon);
  return steps;
}

TrialResult run_trial(const BanditInstance& instance, const Policy& policy,
                      const ExperimentConfig& config, std::size_t trial_index) {
  TrialResult result;
  result.trial = trial_index;
  result.seed = derive_seed(config.base_seed, trial_index);
  RandomStream rng(result.seed);
  PolicyState state(instance.num_arms());
  const auto gaps = instance.gaps();
  const auto stride = config.trajectory_stride;

  double regret = 0.0;
  for (std::uint64_t t = 1; t <= config.horizon; ++t) {
    const std::size_t arm = next_arm(policy, state, rng);
    state.update(arm, pull(instance, arm, rng));
    regret += gaps[arm];
    if (stride != 0 && (t % stride == 0 || t == config.horizon)) result.trajectory.push_back(regret);
  }
  result.final_regret = regret;
  result.pulls.assign(state.counts().begin(), state.counts().end());
  return result;
}

TrialResult run_trial(const ExperimentConfig& config, std::size_t trial_index) {
  config.validate();
  const auto instance = make_problem(config.problem);
  const auto policy = make_policy(config.policy_id, effective_policy_config(config));
  return run_trial(instance, *policy, config, trial_index);
}

std::size_t resolve_threads(std::size_t requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::size_t threads_from_env() {
  const char* raw = std::getenv("BANDIT_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 0) return 0;
  return static_cast<std::size_t>(v);
}

void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(resolve_threads(threads), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i; !failed && (i = next.fetch_add(1)) < n;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

std::vector<TrialResult> run_trials(const ExperimentConfig& config, std::size_t threads) {
  config.validate();
  const auto instance = make_problem(config.problem);
  const auto policy = make_policy(config.policy_id, effective_policy_config(config));
  std::vector<TrialResult> results(config.trials);
  parallel_for(config.trials, threads,
               [&](std::size_t i) { results[i] = run_trial(instance, *policy, config, i); });
  return results;
}

ExperimentSummary summarize(const ExperimentConfig& config, std::span<const TrialResult> trials) {
  ExperimentSummary s;
  s.config = config;
  s.label = make_policy(config.policy_id, effective_policy_config(config))->label();
  s.trials = trials.size();
  if (trials.empty()) return s;

  std::vector<const TrialResult*> ordered;
  for (const auto& r : trials) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto* a, const auto* b) { return a->trial < b->trial; });

  double sum = 0.0;
  s.max = ordered.front()->final_regret;
  for (const auto* r : ordered) {
    sum += r->final_regret;
    s.max = std::max(s.max, r->final_regret);
  }
  const double n = static_cast<double>(ordered.size());
  s.mean = sum / n;
  if (ordered.size() > 1) {
    double ss = 0.0;
    for (const auto* r : ordered) ss += (r->final_regret - s.mean) * (r->final_regret - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

ExperimentSummary run_experiment(const ExperimentConfig& config, std::size_t threads) {
  const auto trials = run_trials(config, threads);
  return summarize(config, trials);
}

std::vector<ExperimentSummary> sweep(std::span<const ExperimentConfig> grid, std::size_t threads) {
  std::vector<ExperimentSummary> out;
  out.reserve(grid.size());
  for (const auto& config : grid) out.push_back(run_experiment(config, threads));
  return out;
}

std::string summaries_to_csv(std::span<const ExperimentSummary> summaries) {
  std::string out = "problem,K,policy,label,T,trials,base_seed,mean,std,max\n";
  for (const auto& s : summaries) {
    out += std::string(to_string(s.config.problem.family)) + ',' +
           std::to_string(s.config.problem.num_arms) + ',' + s.config.policy_id + ',' + s.label +
           ',' + std::to_string(s.config.horizon) + ',' + std::to_string(s.trials) + ',' +
           std::to_string(s.config.base_seed) + ',' + format_real(s.mean) + ',' +
           format_real(s.std) + ',' + format_real(s.max) + '\n';
  }
  return out;
}

std::string summaries_to_json(std::span<const ExperimentSummary> summaries) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : summaries) {
    nlohmann::ordered_json j;
    j["problem"] = std::string(to_string(s.config.problem.family));
    j["K"] = s.config.problem.num_arms;
    j["noise_variance"] = round_output(s.config.problem.noise_variance);
    j["policy"] = s.config.policy_id;
    j["label"] = s.label;
    j["sigma2"] = round_output(s.config.policy.sigma2);
    j["T"] = s.config.horizon;
    j["trials"] = s.trials;
    j["base_seed"] = s.config.base_seed;
    j["mean"] = round_output(s.mean);
    j["std"] = round_output(s.std);
    j["max"] = round_output(s.max);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string trials_to_csv(std::span<const TrialResult> trials) {
  std::string out = "trial,seed,final_regret\n";
  for (const auto& r : trials)
    out += std::to_string(r.trial) + ',' + std::to_string(r.seed) + ',' +
           format_real(r.final_regret) + '\n';
  return out;
}

std::string trajectories_to_csv(std::span<const TrialResult> trials, std::uint64_t horizon,
                                std::size_t stride) {
  const auto steps = trajectory_steps(horizon, stride);
  std::string out = "trial";
  for (auto t : steps) out += ",t" + std::to_string(t);
  out += '\n';
  for (const auto& r : trials) {
    out += std::to_string(r.trial);
    for (double v : r.trajectory) out += ',' + format_real(v);
    out += '\n';
  }
  return out;
}

}  // namespace maillard
