#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maillard/rng.hpp"

namespace maillard {

/// Sufficient statistic shared by every policy: per-arm pull counts, running
/// empirical means and the total number of pulls so far.
class PolicyState {
 public:
  explicit PolicyState(std::size_t num_arms);

  // Builds a state directly from statistics; t is the sum of the counts.
  static PolicyState from_statistics(std::vector<std::uint64_t> counts, std::vector<double> means);

  std::size_t num_arms() const { return counts_.size(); }
  std::uint64_t t() const { return t_; }
  std::uint64_t count(std::size_t a) const { return counts_[a]; }
  double mean(std::size_t a) const { return means_[a]; }
  std::span<const std::uint64_t> counts() const { return counts_; }
  std::span<const double> means() const { return means_; }

  // True once every arm has been pulled at least once.
  bool initialized() const;

  // Records `reward` for `arm`: N += 1, running-mean update, t += 1.
  void update(std::size_t arm, double reward);

 private:
  std::uint64_t t_ = 0;
  std::vector<std::uint64_t> counts_;
  std::vector<double> means_;
};

struct EmpiricalGaps {
  double max_mean = 0.0;
  std::vector<double> gaps;          // max_mean - mean_a, zero on best_set
  std::vector<std::size_t> best_set;  // arms attaining max_mean, ascending
};

EmpiricalGaps empirical_gaps(const PolicyState& state);

/// Explicit probability vector over arms. Entries lie in [0, 1] and sum to 1
/// within 1e-12; the constructor rejects anything else.
class ActionDistribution {
 public:
  explicit ActionDistribution(std::vector<double> probs);

  static ActionDistribution uniform(std::size_t num_arms);
  static ActionDistribution point_mass(std::size_t num_arms, std::size_t arm);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t a) const { return probs_[a]; }
  std::span<const double> probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// Turns log-weights into probabilities with a max shift. Entries at -inf map
// to probability 0.
ActionDistribution normalize_log_weights(std::span<const double> log_weights);

struct PolicyConfig {
  double sigma2 = 0.25;  // sub-Gaussian parameter
  double booster = 4.0;  // B > 1
  double c = 0.01;       // 0 < C <= 1
  double d = 0.01;       // 0 < D <= 1
  std::optional<std::uint64_t> horizon;

  // Throws std::invalid_argument unless B > 1, C and D in (0, 1], sigma2 > 0.
  void validate_msplus() const;
};

// Maillard sampling: p_a proportional to exp(-N_a gap_a^2 / (2 sigma2)).
ActionDistribution ms_distribution(const PolicyState& state, double sigma2);

// MS+ weights. Empirically best arms get B (1 + C ln(1 + ln(t / N_a))); every
// other arm gets exp(-x + ln(1 + D x)) with x = N_a gap_a^2 / (2 sigma2). The
// t here is the decision-time step, i.e. state.t() + 1.
ActionDistribution msplus_distribution(const PolicyState& state, const PolicyConfig& config);

double msplus_best_weight(double booster, double c, double t, double pulls);
double msplus_other_weight(double d, double x);

// Inverse-CDF draw in arm order. The last arm with positive mass absorbs any
// rounding residue.
std::size_t sample(const ActionDistribution& dist, RandomStream& rng);

// Smallest index attaining the max (resp. min).
std::size_t argmax_first(std::span<const double> values);
std::size_t argmin_first(std::span<const double> values);

double ucb1_bonus(double sigma2, double t, double pulls);
double aoucb_bonus(double sigma2, double t, double pulls);
double moss_bonus(double sigma2, double horizon, std::size_t num_arms, double pulls);

// Index vectors. UCB-style indices are maximized, IMED is minimized. All use
// the decision-time step t = state.t() + 1.
std::vector<double> ucb1_index(const PolicyState& state, const PolicyConfig& config);
std::vector<double> aoucb_index(const PolicyState& state, const PolicyConfig& config);
std::vector<double> moss_index(const PolicyState& state, const PolicyConfig& config);
std::vector<double> imed_index(const PolicyState& state, const PolicyConfig& config);

// Gaussian Thompson sampling. TS-SG inflates the posterior variance by 4.
double ts_posterior_std(const PolicyState& state, std::size_t arm, double sigma2,
                        double variance_inflation = 1.0);
std::size_t ts_sample(const PolicyState& state, const PolicyConfig& config, RandomStream& rng);
std::size_t tssg_sample(const PolicyState& state, const PolicyConfig& config, RandomStream& rng);

// Exact probability that two-arm Gaussian TS picks the empirically worse arm:
// erfc(gap / (sqrt(2) w)) / 2 with w^2 = sigma2 (1/N_1 + 1/N_2).
double ts_two_arm_probability(const PolicyState& state, double sigma2);
ActionDistribution ts_two_arm_distribution(const PolicyState& state, double sigma2);

struct PolicyTraits {
  bool subgaussian_guarantee = true;
  bool fixed_budget = false;
};

/// Common interface. Policies are immutable and may be shared between
/// concurrent trials; all per-trial data lives in PolicyState and the stream.
class Policy {
 public:
  virtual ~Policy() = default;

  // Display label, e.g. "MS+8" or "TS-SG".
  virtual std::string label() const = 0;
  virtual PolicyTraits traits() const { return {}; }

  // Post-initialization decision. Requires state.initialized().
  virtual std::size_t select(const PolicyState& state, RandomStream& rng) const = 0;

  // Closed-form action distribution, when the policy has one.
  virtual std::optional<ActionDistribution> distribution(const PolicyState&) const {
    return std::nullopt;
  }
  virtual bool has_distribution() const { return false; }

  const PolicyConfig& config() const { return config_; }

 protected:
  explicit Policy(PolicyConfig config) : config_(std::move(config)) {}
  PolicyConfig config_;
};

// Round-robin on arms 0..K-1 until every arm has one pull, then delegates.
std::size_t next_arm(const Policy& policy, const PolicyState& state, RandomStream& rng);

// Ids: ms, msplus, ucb1, aoucb, moss, imed, ts, tssg. Parameters follow a
// colon as comma-separated key=value pairs, e.g. "msplus:B=8" or
// "ucb1:sigma2=1". Throws std::invalid_argument on unknown ids or keys.
std::unique_ptr<Policy> make_policy(std::string_view id, const PolicyConfig& base);

const std::vector<std::string>& known_policy_ids();

}  // namespace maillard
