#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "random.hpp"

namespace ctmlab {

// Single-changepoint Bernoulli model plus the parameters of the betting
// engines. Defaults are the reference setting: B(0.1) for 5000 steps, then
// B(0.4) for 5000 more.
struct ExperimentConfig {
  double pi0 = 0.1;
  double pi1 = 0.4;
  std::size_t n_total = 10000;
  std::size_t n_pre = 5000;
  double jumper_rate = 0.01;
  double share_rate = 0.001;
  std::size_t grid_size = 100;
  std::uint64_t seed = 0;

  // Throws ConfigError on the first violated invariant.
  void validate() const {
    auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
    auto in_open_unit = [](double p) { return p > 0.0 && p < 1.0; };
    if (!in_unit(pi0)) throw ConfigError("pi0 must lie in [0,1], got " + std::to_string(pi0));
    if (!in_unit(pi1)) throw ConfigError("pi1 must lie in [0,1], got " + std::to_string(pi1));
    if (n_total == 0) throw ConfigError("n_total must be positive");
    if (n_pre > n_total) throw ConfigError("n_pre must not exceed n_total");
    if (!in_open_unit(jumper_rate)) throw ConfigError("jumper_rate must lie in (0,1)");
    if (!in_open_unit(share_rate)) throw ConfigError("share_rate must lie in (0,1)");
    if (grid_size < 2) throw ConfigError("grid_size must be at least 2");
  }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Observations x_1..x_N and k(n), the number of ones among the first n.
struct BinarySequence {
  std::vector<std::uint8_t> observations;
  std::vector<std::size_t> prefix_ones;  // size N + 1, prefix_ones[0] == 0

  std::size_t size() const { return observations.size(); }
  // x_n, 1-based.
  int x(std::size_t n) const { return observations[n - 1]; }
  // k(n), defined for n = 0..N.
  std::size_t k(std::size_t n) const { return prefix_ones[n]; }
};

inline std::vector<std::size_t> prefix_ones(std::span<const std::uint8_t> observations) {
  std::vector<std::size_t> k(observations.size() + 1, 0);
  for (std::size_t i = 0; i < observations.size(); ++i) {
    if (observations[i] > 1) {
      throw DataError("observation " + std::to_string(i + 1) + " is not binary");
    }
    k[i + 1] = k[i] + observations[i];
  }
  return k;
}

inline BinarySequence make_sequence(std::vector<std::uint8_t> observations) {
  BinarySequence seq;
  seq.prefix_ones = prefix_ones(observations);
  seq.observations = std::move(observations);
  return seq;
}

// Draws x_i ~ B(pi0) for i <= n_pre and x_i ~ B(pi1) afterwards, one
// uniform per observation.
inline BinarySequence generate_sequence(const ExperimentConfig& config, RandomStream& stream) {
  config.validate();
  std::vector<std::uint8_t> obs(config.n_total);
  for (std::size_t i = 0; i < config.n_total; ++i) {
    const double p = i < config.n_pre ? config.pi0 : config.pi1;
    obs[i] = static_cast<std::uint8_t>(stream.bernoulli(p));
  }
  return make_sequence(std::move(obs));
}

// Same, using the observation substream of config.seed.
inline BinarySequence generate_sequence(const ExperimentConfig& config) {
  RandomStream stream(config.seed, Substream::observations);
  return generate_sequence(config, stream);
}

}  // namespace ctmlab
