#pragma once

#include <cstddef>
#include <string>

#include "maillard/env.hpp"

namespace maillard {

// Denominator inside the logarithm of the MS leading term: ln(T gap^2 / s)
// with s = 2 sigma2 (default) or s = sigma2.
enum class LogDenominator { TwoSigma2, Sigma2 };

enum class MinimaxFlavor { LogT, LogK };

// Sum over positive-gap arms of 2 sigma2 / gap.
double asymptotic_rate(const BanditInstance& instance, double sigma2);

// Leading terms only; lower-order terms carry unknown constants and are
// omitted. Each log argument is clamped below at e.
double ms_leading_term(const BanditInstance& instance, double sigma2, double c, double horizon,
                       LogDenominator denominator = LogDenominator::TwoSigma2);
double msplus_leading_term(const BanditInstance& instance, double sigma2, double c,
                           double horizon);

// sigma sqrt(K T ln T) or sigma sqrt(K T ln K), without constants.
double minimax_envelope(std::size_t num_arms, double horizon, double sigma, MinimaxFlavor flavor);

struct BoundReport {
  double asymptotic_rate = 0.0;
  double ms_leading = 0.0;
  double msplus_leading = 0.0;
  double minimax_t = 0.0;
  double minimax_k = 0.0;
  double sigma2 = 0.0;
  double c = 0.0;
  double horizon = 0.0;
  std::size_t num_arms = 0;
};

BoundReport bound_report(const BanditInstance& instance, double sigma2, double c, double horizon,
                         LogDenominator denominator = LogDenominator::TwoSigma2);

std::string bound_report_json(const BoundReport& report);
std::string bound_report_csv(const BoundReport& report);

}  // namespace maillard
