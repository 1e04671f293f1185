// Runs every process once at the default setting and prints the final
// values (base-10 logarithms).

#include <cstdio>

#include "ctmlab/ctmlab.hpp"

int main() {
  ctmlab::ExperimentConfig config;  // B(0.1) x 5000, then B(0.4) x 5000
  const auto data = ctmlab::generate_data(config);

  const ctmlab::Trajectory runs[] = {
      ctmlab::likelihood_ratio_trajectory(data.sequence, config),
      ctmlab::inf_likelihood_ratio_trajectory(data.sequence, config),
      ctmlab::optimal_ctm(data.pvalues, config),
      ctmlab::pseudo_ctm(data.sequence, data.pvalues, config),
      ctmlab::simple_jumper(data.pvalues, config.jumper_rate),
      ctmlab::sleeper_chooser(data.pvalues, config.share_rate, config.grid_size),
  };
  for (const auto& t : runs) {
    std::printf("%-16s log10 S_N = %10.4f\n", t.label.c_str(), t.final_log10());
  }
}
