#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "trajectory.hpp"

namespace ctmlab {

namespace detail {

inline void require_interior(const ExperimentConfig& config, const char* who) {
  auto interior = [](double p) { return p > 0.0 && p < 1.0; };
  if (!interior(config.pi0) || !interior(config.pi1)) {
    throw ParameterError(std::string(who) + ": pi0 and pi1 must lie in (0,1)");
  }
}

// c * ln(q), with the 0 * ln(0) = 0 convention.
inline double xlogy(double c, double q) { return c == 0.0 ? 0.0 : c * std::log(q); }

}  // namespace detail

// ln of max_pi pi^k (1-pi)^(n-k), attained at pi = k/n; 0^0 := 1.
inline double log_max_bernoulli_likelihood(std::size_t k, std::size_t n) {
  if (k > n) throw ContractError("log_max_bernoulli_likelihood: k exceeds n");
  if (n == 0) return 0.0;
  const auto kd = static_cast<double>(k);
  const auto nd = static_cast<double>(n);
  return detail::xlogy(kd, kd / nd) + detail::xlogy(nd - kd, (nd - kd) / nd);
}

// ln of the changepoint-model likelihood of x_1..x_n.
inline double log_changepoint_likelihood(const BinarySequence& seq, std::size_t n,
                                         const ExperimentConfig& config) {
  const std::size_t pre = std::min(n, config.n_pre);
  const auto k_pre = static_cast<double>(seq.k(pre));
  double ll = k_pre * std::log(config.pi0) + (static_cast<double>(pre) - k_pre) * std::log1p(-config.pi0);
  if (n > config.n_pre) {
    const auto k_post = static_cast<double>(seq.k(n) - seq.k(config.n_pre));
    const auto m = static_cast<double>(n - config.n_pre);
    ll += k_post * std::log(config.pi1) + (m - k_post) * std::log1p(-config.pi1);
  }
  return ll;
}

// S^(0): likelihood ratio of the true changepoint model to B(pi0) on every
// observation. Identically 1 up to n_pre.
inline Trajectory likelihood_ratio_trajectory(const BinarySequence& seq, const ExperimentConfig& config) {
  detail::require_interior(config, "likelihood_ratio_trajectory");
  const double log_up = std::log(config.pi1 / config.pi0);
  const double log_down = std::log((1.0 - config.pi1) / (1.0 - config.pi0));
  Trajectory t{"lr", std::vector<double>(seq.size(), 0.0)};
  double ln_s = 0.0;
  for (std::size_t n = config.n_pre + 1; n <= seq.size(); ++n) {
    ln_s += seq.x(n) == 1 ? log_up : log_down;
    t.log10_values[n - 1] = ln_s / std::numbers::ln10;
  }
  return t;
}

// S^(1): changepoint-model likelihood over the best IID Bernoulli
// likelihood, i.e. the infimum over pi of the likelihood ratios against B(pi).
inline Trajectory inf_likelihood_ratio_trajectory(const BinarySequence& seq,
                                                  const ExperimentConfig& config) {
  detail::require_interior(config, "inf_likelihood_ratio_trajectory");
  Trajectory t{"inf_lr", std::vector<double>(seq.size(), 0.0)};
  for (std::size_t n = 1; n <= seq.size(); ++n) {
    const double ln_s = log_changepoint_likelihood(seq, n, config) - log_max_bernoulli_likelihood(seq.k(n), n);
    t.log10_values[n - 1] = ln_s / std::numbers::ln10;
  }
  return t;
}

}  // namespace ctmlab
