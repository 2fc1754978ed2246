#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maillard/rng.hpp"

namespace maillard {

enum class ArmKind { Gaussian, Bernoulli };

/// Reward model of a single arm. Construct through the named factories, which
/// enforce the model invariants.
struct ArmModel {
  ArmKind kind = ArmKind::Gaussian;
  double mean = 0.0;
  double variance = 1.0;  // implied mean*(1-mean) for Bernoulli

  static ArmModel gaussian(double mean, double variance);
  static ArmModel bernoulli(double mean);
};

/// Ground-truth bandit problem. Immutable once built.
class BanditInstance {
 public:
  explicit BanditInstance(std::vector<ArmModel> arms);

  std::size_t num_arms() const { return arms_.size(); }
  const ArmModel& arm(std::size_t a) const { return arms_.at(a); }
  std::span<const ArmModel> arms() const { return arms_; }

  double best_mean() const { return best_mean_; }
  double gap(std::size_t a) const { return gaps_.at(a); }
  std::span<const double> gaps() const { return gaps_; }
  double max_gap() const;
  std::vector<double> means() const;

 private:
  std::vector<ArmModel> arms_;
  std::vector<double> gaps_;
  double best_mean_ = 0.0;
};

enum class ProblemFamily {
  GaussianLinear,
  GaussianEqual,
  BernoulliLinear,
  BernoulliEqual,
  BoosterTuning,
};

std::string_view to_string(ProblemFamily family);
ProblemFamily parse_problem_family(std::string_view name);

/// Flat description of a catalog problem, as stored in configs.
struct ProblemSpec {
  ProblemFamily family = ProblemFamily::GaussianEqual;
  std::size_t num_arms = 10;
  double noise_variance = 0.25;
};

// Catalog of synthetic problems:
//   Linear        mu_i = 1 - i/K,  K in {10, 100}
//   GaussianEqual mu_1 = 1, rest 0.5,  K in {2, 10, 100}
//   BernoulliEqual mu_1 = 0.1, rest 0.05,  K in {2, 10, 100}
//   BoosterTuning K = 10, means 0.9, 0.8, ..., 0.0 with unit variance
// Throws std::invalid_argument for an unsupported (family, K) pair.
BanditInstance make_problem(ProblemFamily family, std::size_t num_arms, double noise_variance);
BanditInstance make_problem(const ProblemSpec& spec);

// The ten rows of the evaluation table (Gaussian and Bernoulli, Linear and
// Equal, every permitted K).
std::vector<ProblemSpec> evaluation_problems(double noise_variance);

/// Draws one reward from `arm`. Throws std::out_of_range on a bad index.
double pull(const BanditInstance& instance, std::size_t arm, RandomStream& rng);

}  // namespace maillard
