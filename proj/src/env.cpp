#include "maillard/env.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace maillard {

ArmModel ArmModel::gaussian(double mean, double variance) {
  if (!std::isfinite(mean)) throw std::invalid_argument("gaussian arm: mean must be finite");
  if (!(variance > 0.0) || !std::isfinite(variance))
    throw std::invalid_argument("gaussian arm: variance must be positive");
  return ArmModel{ArmKind::Gaussian, mean, variance};
}

ArmModel ArmModel::bernoulli(double mean) {
  if (!(mean >= 0.0 && mean <= 1.0))
    throw std::invalid_argument("bernoulli arm: mean must lie in [0, 1]");
  return ArmModel{ArmKind::Bernoulli, mean, mean * (1.0 - mean)};
}

BanditInstance::BanditInstance(std::vector<ArmModel> arms) : arms_(std::move(arms)) {
  if (arms_.size() < 2) throw std::invalid_argument("bandit instance needs at least 2 arms");
  best_mean_ = arms_.front().mean;
  for (const auto& a : arms_) best_mean_ = std::max(best_mean_, a.mean);
  gaps_.reserve(arms_.size());
  for (const auto& a : arms_) gaps_.push_back(best_mean_ - a.mean);
}

double BanditInstance::max_gap() const { return *std::max_element(gaps_.begin(), gaps_.end()); }

std::vector<double> BanditInstance::means() const {
  std::vector<double> out;
  out.reserve(arms_.size());
  for (const auto& a : arms_) out.push_back(a.mean);
  return out;
}

namespace {

constexpr std::array<std::pair<ProblemFamily, std::string_view>, 5> kFamilyNames{{
    {ProblemFamily::GaussianLinear, "GaussianLinear"},
    {ProblemFamily::GaussianEqual, "GaussianEqual"},
    {ProblemFamily::BernoulliLinear, "BernoulliLinear"},
    {ProblemFamily::BernoulliEqual, "BernoulliEqual"},
    {ProblemFamily::BoosterTuning, "BoosterTuning"},
}};

bool permitted(ProblemFamily family, std::size_t k) {
  switch (family) {
    case ProblemFamily::GaussianLinear:
    case ProblemFamily::BernoulliLinear:
      return k == 10 || k == 100;
    case ProblemFamily::GaussianEqual:
    case ProblemFamily::BernoulliEqual:
      return k == 2 || k == 10 || k == 100;
    case ProblemFamily::BoosterTuning:
      return k == 10;
  }
  return false;
}

}  // namespace

std::string_view to_string(ProblemFamily family) {
  for (const auto& [f, name] : kFamilyNames)
    if (f == family) return name;
  return "unknown";
}

ProblemFamily parse_problem_family(std::string_view name) {
  for (const auto& [f, n] : kFamilyNames)
    if (n == name) return f;
  throw std::invalid_argument("unknown problem family '" + std::string(name) + "'");
}

BanditInstance make_problem(ProblemFamily family, std::size_t num_arms, double noise_variance) {
  if (!permitted(family, num_arms))
    throw std::invalid_argument("problem family " + std::string(to_string(family)) +
                                " does not support K=" + std::to_string(num_arms));
  const bool gaussian =
      family == ProblemFamily::GaussianLinear || family == ProblemFamily::GaussianEqual;
  if (gaussian && !(noise_variance > 0.0))
    throw std::invalid_argument("gaussian problems need noise_variance > 0");

  const double k = static_cast<double>(num_arms);
  std::vector<ArmModel> arms;
  arms.reserve(num_arms);
  for (std::size_t i = 1; i <= num_arms; ++i) {
    const double linear = 1.0 - static_cast<double>(i) / k;
    switch (family) {
      case ProblemFamily::GaussianLinear:
        arms.push_back(ArmModel::gaussian(linear, noise_variance));
        break;
      case ProblemFamily::GaussianEqual:
        arms.push_back(ArmModel::gaussian(i == 1 ? 1.0 : 0.5, noise_variance));
        break;
      case ProblemFamily::BernoulliLinear:
        arms.push_back(ArmModel::bernoulli(linear));
        break;
      case ProblemFamily::BernoulliEqual:
        arms.push_back(ArmModel::bernoulli(i == 1 ? 0.1 : 0.05));
        break;
      case ProblemFamily::BoosterTuning:
        arms.push_back(ArmModel::gaussian(linear, 1.0));
        break;
    }
  }
  return BanditInstance(std::move(arms));
}

BanditInstance make_problem(const ProblemSpec& spec) {
  return make_problem(spec.family, spec.num_arms, spec.noise_variance);
}

std::vector<ProblemSpec> evaluation_problems(double noise_variance) {
  std::vector<ProblemSpec> out;
  for (auto family : {ProblemFamily::GaussianEqual, ProblemFamily::GaussianLinear,
                      ProblemFamily::BernoulliEqual, ProblemFamily::BernoulliLinear}) {
    for (std::size_t k : {2u, 10u, 100u}) {
      if (permitted(family, k)) out.push_back({family, k, noise_variance});
    }
  }
  return out;
}

double pull(const BanditInstance& instance, std::size_t arm, RandomStream& rng) {
  if (arm >= instance.num_arms()) throw std::out_of_range("pull: arm index out of range");
  const ArmModel& m = instance.arm(arm);
  if (m.kind == ArmKind::Bernoulli) return rng.uniform() < m.mean ? 1.0 : 0.0;
  return m.mean + std::sqrt(m.variance) * rng.normal();
}

}  // namespace maillard
