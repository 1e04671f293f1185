// Command-line front end: simulate, sweep, validate.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctmlab/ctmlab.hpp"

namespace {

using ctmlab::ExperimentConfig;

// Flags shared by simulate and sweep. Unset flags leave the config (defaults
// or --config file) untouched.
struct ConfigFlags {
  std::string config_file;
  std::optional<double> pi0, pi1, jumper_rate, share_rate;
  std::optional<std::size_t> n, n0, grid_size;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* app, bool with_seed) {
    app->add_option("--config", config_file, "Flat JSON config file; flags override its values");
    app->add_option("--pi0", pi0, "Pre-change Bernoulli parameter (default 0.1)");
    app->add_option("--pi1", pi1, "Post-change Bernoulli parameter (default 0.4)");
    app->add_option("--n", n, "Number of observations (default 10000)");
    app->add_option("--n0", n0, "Changepoint: observations drawn before the change (default 5000)");
    app->add_option("--jumper-rate", jumper_rate, "Simple Jumper rate J (default 0.01)");
    app->add_option("--share-rate", share_rate, "Sleeper/Chooser share rate R (default 0.001)");
    app->add_option("--grid-size", grid_size, "Sleeper/Chooser grid size G (default 100)");
    if (with_seed) app->add_option("--seed", seed, "Master seed (default 0)");
  }

  ExperimentConfig resolve(bool check = true) const {
    ExperimentConfig c = config_file.empty() ? ExperimentConfig{} : ctmlab::load_config_file(config_file);
    if (pi0) c.pi0 = *pi0;
    if (pi1) c.pi1 = *pi1;
    if (n) c.n_total = *n;
    if (n0) c.n_pre = *n0;
    if (jumper_rate) c.jumper_rate = *jumper_rate;
    if (share_rate) c.share_rate = *share_rate;
    if (grid_size) c.grid_size = *grid_size;
    if (seed) c.seed = *seed;
    if (check) c.validate();
    return c;
  }
};

// "0..19", "3,5,8", or a mix such as "0..4,10".
std::vector<std::uint64_t> parse_seed_list(const std::vector<std::string>& items) {
  std::vector<std::uint64_t> seeds;
  auto parse_u64 = [](const std::string& s) {
    std::size_t pos = 0;
    const auto v = std::stoull(s, &pos);
    if (pos != s.size()) throw ctmlab::UsageError("bad seed '" + s + "'");
    return static_cast<std::uint64_t>(v);
  };
  for (const auto& item : items) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      seeds.push_back(parse_u64(item));
      continue;
    }
    const auto lo = parse_u64(item.substr(0, dots));
    const auto hi = parse_u64(item.substr(dots + 2));
    if (hi < lo) throw ctmlab::UsageError("empty seed range '" + item + "'");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal test martingales on Bernoulli changepoint data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ctmlab::kVersion));

  ConfigFlags sim_flags;
  std::vector<std::string> sim_processes{"all"};
  std::string out_dir = "run";
  bool record_duration = false;
  auto* simulate = app.add_subcommand("simulate", "Run one seeded experiment and write trajectory CSVs + manifest");
  sim_flags.attach(simulate, true);
  simulate->add_option("--processes", sim_processes,
                       "lr, inf_lr, optimal_ctm, pseudo_ctm, simple_jumper, sleeper_chooser, or all")
      ->delimiter(',');
  simulate->add_option("--out-dir", out_dir, "Run directory");
  simulate->add_flag("--record-duration", record_duration,
                     "Store wall-clock time in the manifest (makes it non-reproducible)");

  ConfigFlags sweep_flags;
  std::vector<std::string> sweep_processes{"all"};
  std::vector<std::string> seed_items{"0..19"};
  std::string sweep_out;
  unsigned jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Final values over many seeds, with median/mean/sd");
  sweep_flags.attach(sweep, false);
  sweep->add_option("--processes", sweep_processes, "Processes to evaluate")->delimiter(',');
  sweep->add_option("--seeds", seed_items, "Seed list and/or inclusive ranges, e.g. 0..19 or 1,4,9")
      ->delimiter(',');
  sweep->add_option("--out", sweep_out, "Summary CSV path (default: stdout)");
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  ConfigFlags val_flags;
  std::string engine;
  double val_pi = 0.5;
  std::size_t val_n = 100;
  std::size_t reps = 10000;
  std::uint64_t val_seed = 0;
  auto* validate = app.add_subcommand("validate", "Monte Carlo check that E[S_n] = 1 under IID data");
  validate->add_option("--engine", engine, "simple_jumper, sleeper_chooser or optimal_ctm")->required();
  validate->add_option("--pi", val_pi, "IID Bernoulli parameter");
  validate->add_option("--n", val_n, "Sequence length");
  validate->add_option("--reps", reps, "Monte Carlo replications (>= 100)");
  validate->add_option("--seed", val_seed, "Seed");
  validate->add_option("--config", val_flags.config_file, "Engine parameters from a JSON config");
  validate->add_option("--pi0", val_flags.pi0, "optimal_ctm: assumed pre-change parameter");
  validate->add_option("--pi1", val_flags.pi1, "optimal_ctm: assumed post-change parameter");
  validate->add_option("--n0", val_flags.n0, "optimal_ctm: assumed changepoint");
  validate->add_option("--jumper-rate", val_flags.jumper_rate, "Simple Jumper rate J");
  validate->add_option("--share-rate", val_flags.share_rate, "Sleeper/Chooser share rate R");
  validate->add_option("--grid-size", val_flags.grid_size, "Sleeper/Chooser grid size G");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const auto config = sim_flags.resolve();
      const auto manifest = ctmlab::run_experiment(config, ctmlab::parse_processes(sim_processes), out_dir,
                                                   {.record_duration = record_duration});
      std::cout << manifest.to_json().dump(2) << "\n";
    } else if (sweep->parsed()) {
      const auto config = sweep_flags.resolve();
      const auto seeds = parse_seed_list(seed_items);
      const auto result = ctmlab::sweep_seeds(config, seeds, ctmlab::parse_processes(sweep_processes), jobs);
      if (sweep_out.empty()) {
        std::cout << result.to_csv();
      } else {
        ctmlab::write_text_file(sweep_out, result.to_csv());
      }
    } else if (validate->parsed()) {
      // The validated length is --n; the config's n_total plays no role.
      auto config = val_flags.resolve(false);
      config.n_total = std::max(config.n_total, config.n_pre);
      const auto report = ctmlab::validate_martingale(engine, val_pi, val_n, reps, val_seed, config);
      std::cout << report.to_json().dump(2) << "\n";
      return report.pass ? 0 : 3;
    }
  } catch (const ctmlab::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ctmlab::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
