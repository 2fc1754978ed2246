#include "maillard/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "maillard/format.hpp"

namespace maillard {

namespace {

double clamped_log(double x) { return std::log(std::max(x, std::numbers::e)); }

void check_inputs(double sigma2, double c, double horizon) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("bounds: sigma2 must be positive");
  if (!(c > 0.0)) throw std::invalid_argument("bounds: c must be positive");
  if (!(horizon >= 1.0)) throw std::invalid_argument("bounds: horizon must be at least 1");
}

}  // namespace

double asymptotic_rate(const BanditInstance& instance, double sigma2) {
  double rate = 0.0;
  for (double gap : instance.gaps())
    if (gap > 0.0) rate += 2.0 * sigma2 / gap;
  return rate;
}

double ms_leading_term(const BanditInstance& instance, double sigma2, double c, double horizon,
                       LogDenominator denominator) {
  check_inputs(sigma2, c, horizon);
  const double s = denominator == LogDenominator::TwoSigma2 ? 2.0 * sigma2 : sigma2;
  const double scale = 2.0 * sigma2 * (1.0 + c) * (1.0 + c);
  double total = 0.0;
  for (double gap : instance.gaps()) {
    if (gap > 0.0) total += scale * clamped_log(horizon * gap * gap / s) / gap;
  }
  return total;
}

double msplus_leading_term(const BanditInstance& instance, double sigma2, double c,
                           double horizon) {
  check_inputs(sigma2, c, horizon);
  const double scale = 2.0 * sigma2 * (1.0 + c) * (1.0 + c);
  double total = 0.0;
  for (double gap : instance.gaps()) {
    if (gap <= 0.0) continue;
    const double u = horizon * gap * gap / (2.0 * sigma2);
    total += scale * clamped_log(u * (1.0 + std::log1p(u))) / gap;
  }
  return total;
}

double minimax_envelope(std::size_t num_arms, double horizon, double sigma, MinimaxFlavor flavor) {
  if (num_arms < 2) throw std::invalid_argument("minimax_envelope: K must be at least 2");
  if (!(horizon >= 2.0)) throw std::invalid_argument("minimax_envelope: T must be at least 2");
  const double k = static_cast<double>(num_arms);
  const double log_term = flavor == MinimaxFlavor::LogT ? std::log(horizon) : std::log(k);
  return sigma * std::sqrt(k * horizon * log_term);
}

BoundReport bound_report(const BanditInstance& instance, double sigma2, double c, double horizon,
                         LogDenominator denominator) {
  BoundReport r;
  r.asymptotic_rate = asymptotic_rate(instance, sigma2);
  r.ms_leading = ms_leading_term(instance, sigma2, c, horizon, denominator);
  r.msplus_leading = msplus_leading_term(instance, sigma2, c, horizon);
  const double sigma = std::sqrt(sigma2);
  r.minimax_t = minimax_envelope(instance.num_arms(), horizon, sigma, MinimaxFlavor::LogT);
  r.minimax_k = minimax_envelope(instance.num_arms(), horizon, sigma, MinimaxFlavor::LogK);
  r.sigma2 = sigma2;
  r.c = c;
  r.horizon = horizon;
  r.num_arms = instance.num_arms();
  return r;
}

std::string bound_report_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["note"] = "leading term only";
  j["asymptotic_rate"] = round_output(r.asymptotic_rate);
  j["ms_leading"] = round_output(r.ms_leading);
  j["msplus_leading"] = round_output(r.msplus_leading);
  j["minimax_T"] = round_output(r.minimax_t);
  j["minimax_K"] = round_output(r.minimax_k);
  j["sigma2"] = round_output(r.sigma2);
  j["c"] = round_output(r.c);
  j["T"] = round_output(r.horizon);
  j["K"] = r.num_arms;
  return j.dump(2) + "\n";
}

std::string bound_report_csv(const BoundReport& r) {
  std::string out = "asymptotic_rate,ms_leading,msplus_leading,minimax_T,minimax_K,sigma2,c,T,K\n";
  for (double v : {r.asymptotic_rate, r.ms_leading, r.msplus_leading, r.minimax_t, r.minimax_k,
                   r.sigma2, r.c, r.horizon})
    out += format_real(v) + ',';
  out += std::to_string(r.num_arms) + '\n';
  return out;
}

}  // namespace maillard
