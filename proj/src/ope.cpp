#include "maillard/ope.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "maillard/format.hpp"

namespace maillard {

std::vector<LogRecord> log_run(const Policy& policy, const BanditInstance& instance,
                               std::uint64_t horizon, std::uint64_t seed) {
  if (!policy.has_distribution())
    throw std::invalid_argument("log_run: policy " + policy.label() +
                                " has no closed-form action distribution");
  RandomStream rng(seed);
  PolicyState state(instance.num_arms());
  std::vector<LogRecord> log;
  log.reserve(horizon);
  for (std::uint64_t step = 1; step <= horizon; ++step) {
    LogRecord rec{.step = step};
    if (!state.initialized()) {
      rec.arm = next_arm(policy, state, rng);
    } else {
      const auto dist = *policy.distribution(state);
      rec.arm = sample(dist, rng);
      rec.propensity = dist[rec.arm];
    }
    rec.reward = pull(instance, rec.arm, rng);
    state.update(rec.arm, rec.reward);
    log.push_back(rec);
  }
  return log;
}

IpsEstimate ips_value(std::span<const LogRecord> log, const ActionDistribution& target) {
  const std::size_t k = target.size();
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;
  for (const auto& rec : log) {
    if (rec.step <= k) continue;
    if (rec.arm >= k) throw std::out_of_range("ips_value: logged arm outside target support");
    if (!(rec.propensity > 0.0)) throw std::domain_error("ips_value: zero propensity in log");
    const double term = target[rec.arm] / rec.propensity * rec.reward;
    sum += term;
    sum_sq += term * term;
    ++n;
  }
  if (n == 0) throw std::invalid_argument("ips_value: log has no post-initialization records");
  IpsEstimate est;
  est.records = n;
  est.value = sum / static_cast<double>(n);
  if (n > 1) {
    const double dn = static_cast<double>(n);
    const double var = std::max(0.0, (sum_sq - dn * est.value * est.value) / (dn - 1.0));
    est.standard_error = std::sqrt(var / dn);
  }
  return est;
}

double PropensityEstimate::denominator(std::size_t arm) const {
  return std::max(frequencies[arm], floor());
}

PropensityEstimate mc_propensity(const Policy& policy, const PolicyState& state,
                                 std::size_t samples, RandomStream& rng) {
  if (samples == 0) throw std::invalid_argument("mc_propensity: need at least one sample");
  std::vector<std::size_t> hits(state.num_arms(), 0);
  for (std::size_t i = 0; i < samples; ++i) ++hits[next_arm(policy, state, rng)];
  std::vector<double> freq(hits.size());
  for (std::size_t a = 0; a < hits.size(); ++a)
    freq[a] = static_cast<double>(hits[a]) / static_cast<double>(samples);
  return PropensityEstimate{ActionDistribution(std::move(freq)), samples};
}

std::string log_to_csv(std::span<const LogRecord> log) {
  std::string out = "step,arm,reward,propensity\n";
  for (const auto& r : log) {
    out += std::to_string(r.step) + ',' + std::to_string(r.arm + 1) + ',' +
           format_real(r.reward) + ',' + format_real(r.propensity) + '\n';
  }
  return out;
}

std::vector<LogRecord> log_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "step,arm,reward,propensity")
    throw std::invalid_argument("log csv: missing header 'step,arm,reward,propensity'");
  std::vector<LogRecord> log;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string f[4];
    for (auto& field : f)
      if (!std::getline(row, field, ','))
        throw std::invalid_argument("log csv: short row at line " + std::to_string(lineno));
    try {
      const auto arm = std::stoull(f[1]);
      if (arm == 0) throw std::invalid_argument("arm index is 1-based");
      log.push_back({std::stoull(f[0]), static_cast<std::size_t>(arm - 1), std::stod(f[2]),
                     std::stod(f[3])});
    } catch (const std::exception& e) {
      throw std::invalid_argument("log csv: bad row at line " + std::to_string(lineno) + ": " +
                                  e.what());
    }
    if (log.size() > 1 && log.back().step <= log[log.size() - 2].step)
      throw std::invalid_argument("log csv: steps must increase (line " + std::to_string(lineno) +
                                  ")");
  }
  return log;
}

std::string log_to_jsonl(std::span<const LogRecord> log) {
  std::string out;
  for (const auto& r : log) {
    nlohmann::ordered_json j;
    j["step"] = r.step;
    j["arm"] = r.arm + 1;
    j["reward"] = round_output(r.reward);
    j["propensity"] = round_output(r.propensity);
    out += j.dump() + '\n';
  }
  return out;
}

}  // namespace maillard
