#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "calibrators.hpp"
#include "conformal.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "trajectory.hpp"

namespace ctmlab {

// Sleeper/Chooser betting martingale.
//
// Capital starts in a sleeping account that never bets. After every step a
// fraction R of the sleeping capital is split equally over (G-1)^2 active
// accounts, account (i, j) betting with f_{a,b}, a = i/G, b = j/G, from the
// next p-value on. Accounts are stored in linear scale with a shared base-10
// offset: true capital = stored * 10^log10_offset.
class SleeperChooser {
 public:
  static constexpr double kRescaleAbove = 1e100;
  static constexpr double kRescaleBelow = 1e-100;

  SleeperChooser(double share_rate, std::size_t grid_size)
      : share_rate_(share_rate), grid_size_(grid_size) {
    if (!(share_rate > 0.0 && share_rate < 1.0)) throw ParameterError("sleeper_chooser: R must lie in (0,1)");
    if (grid_size < 2) throw ParameterError("sleeper_chooser: G must be at least 2");
    const std::size_t side = grid_size - 1;
    thresholds_.resize(side);
    lower_.resize(side * side);
    upper_.resize(side * side);
    active_.assign(side * side, 0.0);
    for (std::size_t i = 0; i < side; ++i) {
      thresholds_[i] = static_cast<double>(i + 1) / static_cast<double>(grid_size);
      for (std::size_t j = 0; j < side; ++j) {
        const auto f = two_level(thresholds_[i], static_cast<double>(j + 1) / static_cast<double>(grid_size));
        lower_[i * side + j] = f.lower_value;
        upper_[i * side + j] = f.upper_value;
      }
    }
  }

  std::size_t side() const { return grid_size_ - 1; }
  double sleeping() const { return sleeping_; }
  // Row-major over (i, j), i indexing a and j indexing b.
  std::span<const double> active() const { return active_; }
  double log10_offset() const { return log10_offset_; }

  // Multiplies every active account by its betting function at p.
  void bet(double p) {
    const std::size_t s = side();
    for (std::size_t i = 0; i < s; ++i) {
      const double* factor = (p <= thresholds_[i] ? lower_.data() : upper_.data()) + i * s;
      double* row = active_.data() + i * s;
      for (std::size_t j = 0; j < s; ++j) row[j] *= factor[j];
    }
  }

  // Stored (offset-free) total S_box + sum S_{a,b}.
  double stored_total() const { return sleeping_ + std::accumulate(active_.begin(), active_.end(), 0.0); }

  double total_log10() const { return std::log10(stored_total()) + log10_offset_; }

  // Moves R * S_box from the sleeping account into the active grid.
  void share() {
    const double cell = share_rate_ * sleeping_ / static_cast<double>(active_.size());
    for (double& a : active_) a += cell;
    sleeping_ *= 1.0 - share_rate_;
  }

  // One full step; returns log10 S_n (emitted between bet and share).
  double step(double p) {
    bet(p);
    const double emitted = total_log10();
    share();
    rescale();
    return emitted;
  }

 private:
  void rescale() {
    const double largest = std::max(sleeping_, *std::max_element(active_.begin(), active_.end()));
    const double total = stored_total();
    if (largest <= kRescaleAbove && total >= kRescaleBelow) return;
    const double m = std::floor(std::log10(largest));
    const double factor = std::pow(10.0, -m);
    sleeping_ *= factor;
    for (double& a : active_) a *= factor;
    log10_offset_ += m;
  }

  double share_rate_;
  std::size_t grid_size_;
  std::vector<double> thresholds_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  double sleeping_ = 1.0;
  std::vector<double> active_;
  double log10_offset_ = 0.0;
};

// Simple Jumper: three linear betting functions f_eps(p) = 1 + eps*(p - 1/2),
// eps in {-1, 0, 1}, with capital jumping between them at rate J.
class SimpleJumper {
 public:
  explicit SimpleJumper(double jumper_rate) : jumper_rate_(jumper_rate) {
    if (!(jumper_rate >= 0.0 && jumper_rate < 1.0)) throw ParameterError("simple_jumper: J must lie in [0,1)");
  }

  double step(double p) {
    for (std::size_t e = 0; e < 3; ++e) {
      capital_[e] *= 1.0 + kEps[e] * (p - 0.5);
    }
    const double total = capital_[0] + capital_[1] + capital_[2];
    const double emitted = std::log10(total) + log10_offset_;
    for (double& c : capital_) c = (1.0 - jumper_rate_) * c + jumper_rate_ * total / 3.0;
    if (total > 1e100 || total < 1e-100) {
      const double m = std::floor(std::log10(total));
      for (double& c : capital_) c *= std::pow(10.0, -m);
      log10_offset_ += m;
    }
    return emitted;
  }

 private:
  static constexpr std::array<double, 3> kEps{-1.0, 0.0, 1.0};
  double jumper_rate_;
  std::array<double, 3> capital_{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  double log10_offset_ = 0.0;
};

inline Trajectory sleeper_chooser(const PValueSequence& pvalues, double share_rate, std::size_t grid_size) {
  SleeperChooser engine(share_rate, grid_size);
  Trajectory t{"sleeper_chooser", {}};
  t.log10_values.reserve(pvalues.size());
  for (double p : pvalues.pvalues) t.log10_values.push_back(engine.step(p));
  return t;
}

// The public surface takes J in (0,1); the class also allows J = 0 (a fixed
// mixture), which tests use.
inline Trajectory simple_jumper(const PValueSequence& pvalues, double jumper_rate) {
  if (!(jumper_rate > 0.0 && jumper_rate < 1.0)) throw ParameterError("simple_jumper: J must lie in (0,1)");
  SimpleJumper engine(jumper_rate);
  Trajectory t{"simple_jumper", {}};
  t.log10_values.reserve(pvalues.size());
  for (double p : pvalues.pvalues) t.log10_values.push_back(engine.step(p));
  return t;
}

// Conformal test martingale with the likelihood-ratio betting function;
// no betting during the first n_pre steps.
inline Trajectory optimal_ctm(const PValueSequence& pvalues, const ExperimentConfig& config) {
  Trajectory t{"optimal_ctm", std::vector<double>(pvalues.size(), 0.0)};
  double ln_s = 0.0;
  for (std::size_t n = config.n_pre + 1; n <= pvalues.size(); ++n) {
    ln_s += std::log(optimal_betting(n, config)(pvalues.pvalues[n - 1]));
    t.log10_values[n - 1] = ln_s / std::numbers::ln10;
  }
  return t;
}

// Conformal e-pseudomartingale: like optimal_ctm but the betting function
// uses the realised k(n), which includes the current observation.
inline Trajectory pseudo_ctm(const BinarySequence& seq, const PValueSequence& pvalues,
                             const ExperimentConfig& config) {
  if (seq.size() != pvalues.size()) throw ContractError("pseudo_ctm: sequence and p-values differ in length");
  Trajectory t{"pseudo_ctm", std::vector<double>(pvalues.size(), 0.0)};
  double ln_s = 0.0;
  for (std::size_t n = config.n_pre + 1; n <= pvalues.size(); ++n) {
    ln_s += std::log(pseudo_betting(n, seq.k(n), config)(pvalues.pvalues[n - 1]));
    t.log10_values[n - 1] = ln_s / std::numbers::ln10;
  }
  return t;
}

}  // namespace ctmlab
