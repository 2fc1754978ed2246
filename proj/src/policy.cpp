#include "maillard/policy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace maillard {

namespace {

void require_initialized(const PolicyState& state, const char* what) {
  if (!state.initialized())
    throw std::logic_error(std::string(what) + ": every arm must be pulled once first");
}

void require_sigma2(double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw std::invalid_argument("sigma2 must be positive");
}

double decision_time(const PolicyState& state) { return static_cast<double>(state.t() + 1); }

double max_mean(const PolicyState& state) {
  const auto m = state.means();
  return *std::max_element(m.begin(), m.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// PolicyState

PolicyState::PolicyState(std::size_t num_arms) : counts_(num_arms, 0), means_(num_arms, 0.0) {
  if (num_arms < 2) throw std::invalid_argument("policy state needs at least 2 arms");
}

PolicyState PolicyState::from_statistics(std::vector<std::uint64_t> counts,
                                         std::vector<double> means) {
  if (counts.size() != means.size())
    throw std::invalid_argument("counts and means must have equal length");
  PolicyState s(counts.size());
  s.t_ = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  s.counts_ = std::move(counts);
  s.means_ = std::move(means);
  return s;
}

bool PolicyState::initialized() const {
  return std::all_of(counts_.begin(), counts_.end(), [](auto n) { return n > 0; });
}

void PolicyState::update(std::size_t arm, double reward) {
  if (arm >= counts_.size()) throw std::out_of_range("update: arm index out of range");
  const auto n = ++counts_[arm];
  means_[arm] += (reward - means_[arm]) / static_cast<double>(n);
  ++t_;
}

EmpiricalGaps empirical_gaps(const PolicyState& state) {
  EmpiricalGaps g;
  g.max_mean = max_mean(state);
  g.gaps.resize(state.num_arms());
  for (std::size_t a = 0; a < state.num_arms(); ++a) {
    g.gaps[a] = g.max_mean - state.mean(a);
    if (state.mean(a) == g.max_mean) {
      g.gaps[a] = 0.0;
      g.best_set.push_back(a);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// ActionDistribution

ActionDistribution::ActionDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("action distribution must be non-empty");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("action distribution entries must lie in [0, 1]");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("action distribution must sum to 1");
}

ActionDistribution ActionDistribution::uniform(std::size_t num_arms) {
  return ActionDistribution(std::vector<double>(num_arms, 1.0 / static_cast<double>(num_arms)));
}

ActionDistribution ActionDistribution::point_mass(std::size_t num_arms, std::size_t arm) {
  if (arm >= num_arms) throw std::out_of_range("point_mass: arm index out of range");
  std::vector<double> p(num_arms, 0.0);
  p[arm] = 1.0;
  return ActionDistribution(std::move(p));
}

ActionDistribution normalize_log_weights(std::span<const double> log_weights) {
  const double shift = *std::max_element(log_weights.begin(), log_weights.end());
  if (!std::isfinite(shift)) throw std::domain_error("log weights have no finite maximum");
  std::vector<double> p(log_weights.size());
  double total = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    p[a] = std::exp(log_weights[a] - shift);
    total += p[a];
  }
  for (double& x : p) x /= total;
  return ActionDistribution(std::move(p));
}

// ---------------------------------------------------------------------------
// Maillard sampling

void PolicyConfig::validate_msplus() const {
  require_sigma2(sigma2);
  if (!(booster > 1.0) || !std::isfinite(booster))
    throw std::invalid_argument("MS+ booster B must exceed 1");
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("MS+ parameter C must lie in (0, 1]");
  if (!(d > 0.0 && d <= 1.0)) throw std::invalid_argument("MS+ parameter D must lie in (0, 1]");
}

ActionDistribution ms_distribution(const PolicyState& state, double sigma2) {
  require_initialized(state, "ms_distribution");
  require_sigma2(sigma2);
  const double top = max_mean(state);
  const double scale = 1.0 / (2.0 * sigma2);
  std::vector<double> logw(state.num_arms());
  for (std::size_t a = 0; a < logw.size(); ++a) {
    const double gap = top - state.mean(a);
    logw[a] = -static_cast<double>(state.count(a)) * gap * gap * scale;
  }
  return normalize_log_weights(logw);
}

double msplus_best_weight(double booster, double c, double t, double pulls) {
  return booster * (1.0 + c * std::log(1.0 + std::log(t / pulls)));
}

double msplus_other_weight(double d, double x) { return std::exp(-x + std::log1p(d * x)); }

ActionDistribution msplus_distribution(const PolicyState& state, const PolicyConfig& config) {
  require_initialized(state, "msplus_distribution");
  config.validate_msplus();
  const double top = max_mean(state);
  const double t = decision_time(state);
  const double scale = 1.0 / (2.0 * config.sigma2);
  std::vector<double> logw(state.num_arms());
  for (std::size_t a = 0; a < logw.size(); ++a) {
    const double n = static_cast<double>(state.count(a));
    if (state.mean(a) == top) {
      logw[a] = std::log(msplus_best_weight(config.booster, config.c, t, n));
    } else {
      const double gap = top - state.mean(a);
      const double x = n * gap * gap * scale;
      logw[a] = -x + std::log1p(config.d * x);
    }
  }
  return normalize_log_weights(logw);
}

std::size_t sample(const ActionDistribution& dist, RandomStream& rng) {
  std::size_t last = dist.size() - 1;
  while (last > 0 && dist[last] == 0.0) --last;
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t a = 0; a < last; ++a) {
    cumulative += dist[a];
    if (u < cumulative) return a;
  }
  return last;
}

// ---------------------------------------------------------------------------
// Index policies

std::size_t argmax_first(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t a = 1; a < values.size(); ++a)
    if (values[a] > values[best]) best = a;
  return best;
}

std::size_t argmin_first(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t a = 1; a < values.size(); ++a)
    if (values[a] < values[best]) best = a;
  return best;
}

double ucb1_bonus(double sigma2, double t, double pulls) {
  return std::sqrt(2.0 * sigma2 * std::log(t) / pulls);
}

double aoucb_bonus(double sigma2, double t, double pulls) {
  const double log_t = std::log(t);
  const double log_sq = std::max(1.0, log_t * log_t);
  return std::sqrt(2.0 * sigma2 * std::log(1.0 + t * log_sq) / pulls);
}

double moss_bonus(double sigma2, double horizon, std::size_t num_arms, double pulls) {
  const double ratio = horizon / (static_cast<double>(num_arms) * pulls);
  return std::sqrt(4.0 * sigma2 / pulls * std::max(0.0, std::log(ratio)));
}

namespace {

template <typename Bonus>
std::vector<double> optimistic_index(const PolicyState& state, Bonus bonus) {
  std::vector<double> idx(state.num_arms());
  for (std::size_t a = 0; a < idx.size(); ++a)
    idx[a] = state.mean(a) + bonus(static_cast<double>(state.count(a)));
  return idx;
}

}  // namespace

std::vector<double> ucb1_index(const PolicyState& state, const PolicyConfig& config) {
  require_initialized(state, "ucb1_index");
  const double t = decision_time(state);
  return optimistic_index(state, [&](double n) { return ucb1_bonus(config.sigma2, t, n); });
}

std::vector<double> aoucb_index(const PolicyState& state, const PolicyConfig& config) {
  require_initialized(state, "aoucb_index");
  const double t = decision_time(state);
  return optimistic_index(state, [&](double n) { return aoucb_bonus(config.sigma2, t, n); });
}

std::vector<double> moss_index(const PolicyState& state, const PolicyConfig& config) {
  require_initialized(state, "moss_index");
  if (!config.horizon) throw std::invalid_argument("MOSS needs a horizon");
  const double horizon = static_cast<double>(*config.horizon);
  const std::size_t k = state.num_arms();
  return optimistic_index(state,
                          [&](double n) { return moss_bonus(config.sigma2, horizon, k, n); });
}

std::vector<double> imed_index(const PolicyState& state, const PolicyConfig& config) {
  require_initialized(state, "imed_index");
  require_sigma2(config.sigma2);
  const double top = max_mean(state);
  std::vector<double> idx(state.num_arms());
  for (std::size_t a = 0; a < idx.size(); ++a) {
    const double n = static_cast<double>(state.count(a));
    const double gap = top - state.mean(a);
    idx[a] = n * gap * gap / (2.0 * config.sigma2) + std::log(n);
  }
  return idx;
}

// ---------------------------------------------------------------------------
// Thompson sampling

double ts_posterior_std(const PolicyState& state, std::size_t arm, double sigma2,
                        double variance_inflation) {
  return std::sqrt(variance_inflation * sigma2 / static_cast<double>(state.count(arm)));
}

namespace {

std::size_t gaussian_ts(const PolicyState& state, double sigma2, double inflation,
                        RandomStream& rng) {
  require_initialized(state, "ts_sample");
  std::size_t best = 0;
  double best_theta = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < state.num_arms(); ++a) {
    const double theta = state.mean(a) + ts_posterior_std(state, a, sigma2, inflation) * rng.normal();
    if (theta > best_theta) {
      best_theta = theta;
      best = a;
    }
  }
  return best;
}

}  // namespace

std::size_t ts_sample(const PolicyState& state, const PolicyConfig& config, RandomStream& rng) {
  return gaussian_ts(state, config.sigma2, 1.0, rng);
}

std::size_t tssg_sample(const PolicyState& state, const PolicyConfig& config, RandomStream& rng) {
  return gaussian_ts(state, config.sigma2, 4.0, rng);
}

double ts_two_arm_probability(const PolicyState& state, double sigma2) {
  if (state.num_arms() != 2) throw std::invalid_argument("ts_two_arm_probability needs K = 2");
  require_initialized(state, "ts_two_arm_probability");
  require_sigma2(sigma2);
  const double gap = std::abs(state.mean(0) - state.mean(1));
  const double omega = std::sqrt(sigma2 * (1.0 / static_cast<double>(state.count(0)) +
                                           1.0 / static_cast<double>(state.count(1))));
  return 0.5 * std::erfc(gap / (std::sqrt(2.0) * omega));
}

ActionDistribution ts_two_arm_distribution(const PolicyState& state, double sigma2) {
  const double worse = ts_two_arm_probability(state, sigma2);
  if (state.mean(0) >= state.mean(1)) return ActionDistribution({1.0 - worse, worse});
  return ActionDistribution({worse, 1.0 - worse});
}

// ---------------------------------------------------------------------------
// Policy objects

namespace {

class MaillardSampling final : public Policy {
 public:
  explicit MaillardSampling(PolicyConfig config) : Policy(std::move(config)) {
    require_sigma2(config_.sigma2);
  }
  std::string label() const override { return "MS"; }
  std::size_t select(const PolicyState& state, RandomStream& rng) const override {
    return sample(ms_distribution(state, config_.sigma2), rng);
  }
  std::optional<ActionDistribution> distribution(const PolicyState& state) const override {
    return ms_distribution(state, config_.sigma2);
  }
  bool has_distribution() const override { return true; }
};

std::string format_booster(double b) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, b);
  return ec == std::errc{} ? std::string(buf, end) : std::to_string(b);
}

class MaillardSamplingPlus final : public Policy {
 public:
  explicit MaillardSamplingPlus(PolicyConfig config) : Policy(std::move(config)) {
    config_.validate_msplus();
  }
  std::string label() const override { return "MS+" + format_booster(config_.booster); }
  std::size_t select(const PolicyState& state, RandomStream& rng) const override {
    return sample(msplus_distribution(state, config_), rng);
  }
  std::optional<ActionDistribution> distribution(const PolicyState& state) const override {
    return msplus_distribution(state, config_);
  }
  bool has_distribution() const override { return true; }
};

using IndexFn = std::vector<double> (*)(const PolicyState&, const PolicyConfig&);

class IndexPolicy final : public Policy {
 public:
  IndexPolicy(PolicyConfig config, std::string label, IndexFn index, bool minimize,
              PolicyTraits traits)
      : Policy(std::move(config)),
        label_(std::move(label)),
        index_(index),
        minimize_(minimize),
        traits_(traits) {
    require_sigma2(config_.sigma2);
  }
  std::string label() const override { return label_; }
  PolicyTraits traits() const override { return traits_; }
  std::size_t select(const PolicyState& state, RandomStream&) const override {
    const auto idx = index_(state, config_);
    return minimize_ ? argmin_first(idx) : argmax_first(idx);
  }

 private:
  std::string label_;
  IndexFn index_;
  bool minimize_;
  PolicyTraits traits_;
};

class ThompsonSampling final : public Policy {
 public:
  ThompsonSampling(PolicyConfig config, bool subgaussian)
      : Policy(std::move(config)), subgaussian_(subgaussian) {
    require_sigma2(config_.sigma2);
  }
  std::string label() const override { return subgaussian_ ? "TS-SG" : "TS"; }
  PolicyTraits traits() const override { return {.subgaussian_guarantee = subgaussian_}; }
  std::size_t select(const PolicyState& state, RandomStream& rng) const override {
    return subgaussian_ ? tssg_sample(state, config_, rng) : ts_sample(state, config_, rng);
  }

 private:
  bool subgaussian_;
};

double parse_real(std::string_view text, std::string_view key) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("bad value '" + std::string(text) + "' for policy parameter " +
                                std::string(key));
  return value;
}

}  // namespace

std::size_t next_arm(const Policy& policy, const PolicyState& state, RandomStream& rng) {
  if (state.t() < state.num_arms()) return static_cast<std::size_t>(state.t());
  return policy.select(state, rng);
}

const std::vector<std::string>& known_policy_ids() {
  static const std::vector<std::string> ids{"ms",   "msplus", "ucb1", "aoucb",
                                            "moss", "imed",   "ts",   "tssg"};
  return ids;
}

std::unique_ptr<Policy> make_policy(std::string_view id, const PolicyConfig& base) {
  const auto colon = id.find(':');
  const std::string_view name = id.substr(0, colon);
  PolicyConfig config = base;

  if (colon != std::string_view::npos) {
    std::string_view rest = id.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos)
        throw std::invalid_argument("policy parameter '" + std::string(item) + "' lacks '='");
      const std::string_view key = item.substr(0, eq);
      const double value = parse_real(item.substr(eq + 1), key);
      if (key == "sigma2") {
        config.sigma2 = value;
      } else if (name == "msplus" && key == "B") {
        config.booster = value;
      } else if (name == "msplus" && key == "C") {
        config.c = value;
      } else if (name == "msplus" && key == "D") {
        config.d = value;
      } else {
        throw std::invalid_argument("unknown parameter '" + std::string(key) + "' for policy " +
                                    std::string(name));
      }
    }
  }

  if (name == "ms") return std::make_unique<MaillardSampling>(config);
  if (name == "msplus") return std::make_unique<MaillardSamplingPlus>(config);
  if (name == "ucb1") return std::make_unique<IndexPolicy>(config, "UCB1", ucb1_index, false, PolicyTraits{});
  if (name == "aoucb") return std::make_unique<IndexPolicy>(config, "AOUCB", aoucb_index, false, PolicyTraits{});
  if (name == "moss") {
    if (!config.horizon) throw std::invalid_argument("policy moss needs a horizon");
    return std::make_unique<IndexPolicy>(config, "MOSS", moss_index, false,
                                         PolicyTraits{.subgaussian_guarantee = true, .fixed_budget = true});
  }
  if (name == "imed")
    return std::make_unique<IndexPolicy>(config, "IMED", imed_index, true,
                                         PolicyTraits{.subgaussian_guarantee = false});
  if (name == "ts") return std::make_unique<ThompsonSampling>(config, false);
  if (name == "tssg") return std::make_unique<ThompsonSampling>(config, true);
  throw std::invalid_argument("unknown policy id '" + std::string(name) + "'");
}

}  // namespace maillard
