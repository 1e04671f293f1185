#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "random.hpp"

namespace ctmlab {

struct PValueSequence {
  std::vector<double> pvalues;
  std::vector<double> taus;

  std::size_t size() const { return pvalues.size(); }
};

// Smoothed conformal p-value of the n-th binary observation with the
// identity score alpha_i = x_i:
//
//   p_n = (#{i <= n : alpha_i > alpha_n} + tau * #{i <= n : alpha_i = alpha_n}) / n
//
// With k_n ones among x_1..x_n this reduces to tau*k_n/n when x_n = 1 and
// (k_n + tau*(n - k_n))/n when x_n = 0, so p_n <= k_n/n exactly when x_n = 1.
inline double smoothed_pvalue(std::size_t k_n, std::size_t n, int x_n, double tau) {
  if (n == 0) throw ContractError("smoothed_pvalue: n must be at least 1");
  if (k_n > n) throw ContractError("smoothed_pvalue: k_n exceeds n");
  if (x_n != 0 && x_n != 1) throw ContractError("smoothed_pvalue: x_n must be 0 or 1");
  if (x_n == 1 && k_n == 0) throw ContractError("smoothed_pvalue: x_n = 1 requires k_n >= 1");
  if (x_n == 0 && k_n == n) throw ContractError("smoothed_pvalue: x_n = 0 requires k_n <= n-1");
  if (!(tau >= 0.0 && tau <= 1.0)) throw ContractError("smoothed_pvalue: tau must lie in [0,1]");

  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k_n);
  if (x_n == 1) return (0.0 + tau * kd) / nd;
  return (kd + tau * (nd - kd)) / nd;
}

// p_1..p_N for seq, with tau_n ~ U[0,1) drawn in order from stream.
inline PValueSequence pvalue_sequence(const BinarySequence& seq, RandomStream& stream) {
  PValueSequence out;
  out.pvalues.resize(seq.size());
  out.taus.resize(seq.size());
  for (std::size_t n = 1; n <= seq.size(); ++n) {
    const double tau = stream.uniform();
    out.taus[n - 1] = tau;
    out.pvalues[n - 1] = smoothed_pvalue(seq.k(n), n, seq.x(n), tau);
  }
  return out;
}

inline PValueSequence pvalue_sequence(const BinarySequence& seq, std::uint64_t seed) {
  RandomStream stream(seed, Substream::tie_breaking);
  return pvalue_sequence(seq, stream);
}

}  // namespace ctmlab
