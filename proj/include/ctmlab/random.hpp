#pragma once

#include <cstdint>
#include <random>

namespace ctmlab {

// Substream ids. Each consumer draws from its own stream so that changing
// one consumer never perturbs the others.
enum class Substream : std::uint32_t {
  observations = 0,
  tie_breaking = 1,
};

// Deterministic uniform source.
//
// The engine is std::mt19937_64 seeded through std::seed_seq with the words
// {seed_lo, seed_hi, substream, index}. Both are fully specified by the
// standard, and uniforms are built from the top 53 bits by hand instead of
// std::uniform_real_distribution (whose algorithm is implementation-defined),
// so a given (seed, substream, index) yields the same draws on every platform.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint32_t substream, std::uint32_t index = 0)
      : engine_(make_engine(seed, substream, index)) {}

  RandomStream(std::uint64_t seed, Substream substream, std::uint32_t index = 0)
      : RandomStream(seed, static_cast<std::uint32_t>(substream), index) {}

  // Uniform on [0, 1), multiples of 2^-53.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // 1 with probability p. p = 0 and p = 1 are exact.
  int bernoulli(double p) { return uniform() < p ? 1 : 0; }

  std::uint64_t next_u64() { return engine_(); }

 private:
  static std::mt19937_64 make_engine(std::uint64_t seed, std::uint32_t substream,
                                     std::uint32_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32), substream, index};
    return std::mt19937_64(seq);
  }

  std::mt19937_64 engine_;
};

}  // namespace ctmlab
