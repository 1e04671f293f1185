#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ctmlab {

// A capital process S_1..S_N kept as base-10 logarithms.
struct Trajectory {
  std::string label;
  std::vector<double> log10_values;  // index 0 holds log10 S_1

  std::size_t size() const { return log10_values.size(); }
  // log10 S_n, 1-based.
  double at(std::size_t n) const { return log10_values[n - 1]; }
  // log10 S_N, or 0 (S_0 = 1) for an empty trajectory.
  double final_log10() const { return log10_values.empty() ? 0.0 : log10_values.back(); }
};

}  // namespace ctmlab
