#pragma once

#include <cstddef>
#include <limits>
#include <string>

#include "errors.hpp"
#include "model.hpp"

namespace ctmlab {

enum class CalibratorKind { two_level, optimal, pseudo, unit };

// Two-valued betting function on [0,1]:
//   f(p) = lower_value  if p <= threshold
//          upper_value  otherwise.
// The tie p == threshold belongs to the lower branch.
struct StepCalibrator {
  CalibratorKind kind = CalibratorKind::unit;
  double threshold = 1.0;
  double lower_value = 1.0;
  double upper_value = 1.0;

  double operator()(double p) const { return p <= threshold ? lower_value : upper_value; }

  // Integral over [0,1] evaluated from the closed form.
  double integral() const {
    if (threshold <= 0.0) return upper_value;
    if (threshold >= 1.0) return lower_value;
    return threshold * lower_value + (1.0 - threshold) * upper_value;
  }
};

inline StepCalibrator unit_calibrator() { return {}; }

// f_{a,b}: b/a on [0,a], (1-b)/(1-a) on (a,1]. Integrates to one.
inline StepCalibrator two_level(double a, double b) {
  if (!(a > 0.0 && a < 1.0)) throw ParameterError("two_level: a must lie in (0,1)");
  if (!(b > 0.0 && b < 1.0)) throw ParameterError("two_level: b must lie in (0,1)");
  return {CalibratorKind::two_level, a, b / a, (1.0 - b) / (1.0 - a)};
}

// Likelihood-ratio betting function for step n > n_pre, built from the
// expected fraction of ones (n_pre*pi0 + (n - n_pre)*pi1)/n. Same shape as
// two_level(expected fraction, pi1).
inline StepCalibrator optimal_betting(std::size_t n, const ExperimentConfig& config) {
  if (n <= config.n_pre) throw ContractError("optimal_betting: requires n > n_pre");
  const auto nd = static_cast<double>(n);
  const auto pre = static_cast<double>(config.n_pre);
  const auto post = nd - pre;
  const double expected_ones = pre * config.pi0 + post * config.pi1;
  const double expected_zeros = pre * (1.0 - config.pi0) + post * (1.0 - config.pi1);
  return {CalibratorKind::optimal, expected_ones / nd, nd * config.pi1 / expected_ones,
          nd * (1.0 - config.pi1) / expected_zeros};
}

// Variant that peeks at the realised k(n) instead of its expectation.
// k_n = 0: always the upper branch, value 1 - pi1 (p <= 0 is a null event).
// k_n = n: always the lower branch, value pi1.
inline StepCalibrator pseudo_betting(std::size_t n, std::size_t k_n, const ExperimentConfig& config) {
  if (n == 0) throw ContractError("pseudo_betting: n must be at least 1");
  if (k_n > n) throw ContractError("pseudo_betting: k_n exceeds n");
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k_n);
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (k_n == 0) return {CalibratorKind::pseudo, -inf, 1.0 - config.pi1, 1.0 - config.pi1};
  if (k_n == n) return {CalibratorKind::pseudo, inf, config.pi1, config.pi1};
  return {CalibratorKind::pseudo, kd / nd, nd * config.pi1 / kd, nd * (1.0 - config.pi1) / (nd - kd)};
}

}  // namespace ctmlab
