#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "conformal.hpp"
#include "engines.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "oracles.hpp"
#include "trajectory.hpp"

namespace ctmlab {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Process { lr, inf_lr, optimal_ctm, pseudo_ctm, simple_jumper, sleeper_chooser };

inline constexpr std::array<Process, 6> kAllProcesses{Process::lr,         Process::inf_lr,
                                                      Process::optimal_ctm, Process::pseudo_ctm,
                                                      Process::simple_jumper, Process::sleeper_chooser};

inline std::string_view process_name(Process p) {
  switch (p) {
    case Process::lr: return "lr";
    case Process::inf_lr: return "inf_lr";
    case Process::optimal_ctm: return "optimal_ctm";
    case Process::pseudo_ctm: return "pseudo_ctm";
    case Process::simple_jumper: return "simple_jumper";
    case Process::sleeper_chooser: return "sleeper_chooser";
  }
  return "?";
}

inline std::string_view process_role(Process p) {
  switch (p) {
    case Process::lr: return "oracle benchmark; test martingale only under B(pi0), not under the IID model";
    case Process::inf_lr: return "oracle benchmark; infimum of likelihood ratios over IID Bernoulli measures";
    case Process::optimal_ctm: return "conformal test martingale with oracle betting functions";
    case Process::pseudo_ctm: return "conformal e-pseudomartingale (not a martingale)";
    case Process::simple_jumper: return "conformal test martingale";
    case Process::sleeper_chooser: return "conformal test martingale";
  }
  return "?";
}

inline Process parse_process(std::string_view name) {
  for (Process p : kAllProcesses) {
    if (process_name(p) == name) return p;
  }
  throw UsageError("unknown process '" + std::string(name) + "'");
}

// Canonical order, duplicates removed. Accepts "all".
inline std::vector<Process> parse_processes(const std::vector<std::string>& names) {
  std::vector<Process> out;
  for (const auto& name : names) {
    if (name == "all") {
      out.assign(kAllProcesses.begin(), kAllProcesses.end());
      continue;
    }
    out.push_back(parse_process(name));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw UsageError("no processes requested");
  return out;
}

// 12 significant digits, '.' separator, independent of the global locale.
inline std::string format_log10(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  return std::string(buf, end);
}

inline double parse_double(std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DataError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

// Value as it appears after a CSV round trip.
inline double serialized_value(double value) { return parse_double(format_log10(value)); }

// ---------------------------------------------------------------------------
// Config file: flat JSON object mirroring ExperimentConfig.

inline nlohmann::ordered_json config_to_json(const ExperimentConfig& c) {
  return {{"pi0", c.pi0},
          {"pi1", c.pi1},
          {"n_total", c.n_total},
          {"n_pre", c.n_pre},
          {"jumper_rate", c.jumper_rate},
          {"share_rate", c.share_rate},
          {"grid_size", c.grid_size},
          {"seed", c.seed}};
}

// Keys absent from j keep their value in base.
inline ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {}) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "pi0") base.pi0 = value.get<double>();
      else if (key == "pi1") base.pi1 = value.get<double>();
      else if (key == "n_total") base.n_total = value.get<std::size_t>();
      else if (key == "n_pre") base.n_pre = value.get<std::size_t>();
      else if (key == "jumper_rate") base.jumper_rate = value.get<double>();
      else if (key == "share_rate") base.share_rate = value.get<double>();
      else if (key == "grid_size") base.grid_size = value.get<std::size_t>();
      else if (key == "seed") base.seed = value.get<std::uint64_t>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return base;
}

inline ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

// ---------------------------------------------------------------------------
// Running processes.

struct ExperimentData {
  BinarySequence sequence;
  PValueSequence pvalues;
};

// Observations from substream 0 and tie-breaking draws from substream 1 of
// config.seed.
inline ExperimentData generate_data(const ExperimentConfig& config) {
  config.validate();
  ExperimentData d;
  d.sequence = generate_sequence(config);
  d.pvalues = pvalue_sequence(d.sequence, config.seed);
  return d;
}

inline Trajectory evaluate_process(Process p, const ExperimentData& data, const ExperimentConfig& config) {
  switch (p) {
    case Process::lr: return likelihood_ratio_trajectory(data.sequence, config);
    case Process::inf_lr: return inf_likelihood_ratio_trajectory(data.sequence, config);
    case Process::optimal_ctm: return optimal_ctm(data.pvalues, config);
    case Process::pseudo_ctm: return pseudo_ctm(data.sequence, data.pvalues, config);
    case Process::simple_jumper: return simple_jumper(data.pvalues, config.jumper_rate);
    case Process::sleeper_chooser: return sleeper_chooser(data.pvalues, config.share_rate, config.grid_size);
  }
  throw UsageError("unknown process");
}

inline std::map<Process, Trajectory> run_processes(const ExperimentConfig& config,
                                                   const std::vector<Process>& processes) {
  const ExperimentData data = generate_data(config);
  std::map<Process, Trajectory> out;
  for (Process p : processes) out.emplace(p, evaluate_process(p, data, config));
  return out;
}

// ---------------------------------------------------------------------------
// Files.

inline std::string trajectory_csv(const Trajectory& t) {
  std::string s = "n,log10_value\n";
  s.reserve(t.size() * 24);
  for (std::size_t n = 1; n <= t.size(); ++n) {
    s += std::to_string(n);
    s += ',';
    s += format_log10(t.at(n));
    s += '\n';
  }
  return s;
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

// Parses a trajectory CSV back into (n, log10) rows.
inline std::vector<std::pair<std::size_t, double>> read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "n,log10_value") throw DataError(path.string() + ": bad header");
  std::vector<std::pair<std::size_t, double>> rows;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DataError(path.string() + ": malformed row '" + line + "'");
    std::size_t n = 0;
    const auto first = std::string_view(line).substr(0, comma);
    std::from_chars(first.data(), first.data() + first.size(), n);
    rows.emplace_back(n, parse_double(std::string_view(line).substr(comma + 1)));
  }
  return rows;
}

struct RunManifest {
  ExperimentConfig config;
  std::map<Process, double> finals;  // serialized log10 S_N
  std::map<Process, std::string> files;  // relative to the run directory
  std::string version{kVersion};
  std::optional<double> duration_seconds;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["config"] = config_to_json(config);
    j["finals"] = nlohmann::ordered_json::object();
    j["files"] = nlohmann::ordered_json::object();
    j["roles"] = nlohmann::ordered_json::object();
    for (const auto& [p, v] : finals) {
      const std::string name{process_name(p)};
      j["finals"][name] = v;
      j["files"][name] = files.at(p);
      j["roles"][name] = std::string(process_role(p));
    }
    j["version"] = version;
    j["duration_seconds"] = duration_seconds ? nlohmann::ordered_json(*duration_seconds) : nlohmann::ordered_json();
    return j;
  }
};

struct RunOptions {
  // Off by default: wall-clock time would break byte-identical manifests.
  bool record_duration = false;
};

// Runs the requested processes on one seeded data set and writes
// <process>.csv plus manifest.json into out_dir. Files are first written to
// a private sibling directory which is then renamed into place. An existing
// out_dir is replaced only when it holds a previous run (manifest.json).
inline RunManifest run_experiment(const ExperimentConfig& config, const std::vector<Process>& processes,
                                  const std::filesystem::path& out_dir, RunOptions options = {}) {
  namespace fs = std::filesystem;
  if (processes.empty()) throw UsageError("no processes requested");
  const auto started = std::chrono::steady_clock::now();
  config.validate();

  const fs::path target = fs::absolute(out_dir).lexically_normal();
  const fs::path target_name = target.has_filename() ? target : target.parent_path();
  const fs::path staging = target_name.string() + ".partial";
  std::error_code ec;
  if (fs::exists(target_name, ec) && !fs::is_empty(target_name, ec) && !fs::exists(target_name / "manifest.json")) {
    throw IoError("refusing to replace non-run directory " + target_name.string());
  }
  fs::remove_all(staging, ec);
  fs::create_directories(staging, ec);
  if (ec) throw IoError("cannot create " + staging.string() + ": " + ec.message());

  const auto trajectories = run_processes(config, processes);

  RunManifest manifest;
  manifest.config = config;
  for (const auto& [p, t] : trajectories) {
    const std::string file = std::string(process_name(p)) + ".csv";
    write_text_file(staging / file, trajectory_csv(t));
    manifest.files[p] = file;
    manifest.finals[p] = serialized_value(t.final_log10());
  }
  if (options.record_duration) {
    manifest.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }
  write_text_file(staging / "manifest.json", manifest.to_json().dump(2) + "\n");

  fs::remove_all(target_name, ec);
  fs::rename(staging, target_name, ec);
  if (ec) throw IoError("cannot move run into " + target_name.string() + ": " + ec.message());
  return manifest;
}

// ---------------------------------------------------------------------------
// Seed sweeps.

struct SummaryStats {
  double median = 0.0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 for a single value
};

inline SummaryStats summarize(std::vector<double> values) {
  if (values.empty()) throw UsageError("summarize: no values");
  SummaryStats s;
  const std::size_t m = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(m);
  if (m > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(sq / static_cast<double>(m - 1));
  }
  std::sort(values.begin(), values.end());
  s.median = m % 2 == 1 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
  return s;
}

struct SweepResult {
  std::vector<std::uint64_t> seeds;
  std::vector<Process> processes;
  std::map<Process, std::vector<double>> finals;  // per process, in seed order
  std::map<Process, SummaryStats> summary;

  std::string to_csv() const {
    std::string s = "seed";
    for (Process p : processes) (s += ',') += process_name(p);
    s += '\n';
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      s += std::to_string(seeds[i]);
      for (Process p : processes) (s += ',') += format_log10(finals.at(p)[i]);
      s += '\n';
    }
    const std::pair<const char*, double SummaryStats::*> rows[] = {
        {"median", &SummaryStats::median}, {"mean", &SummaryStats::mean}, {"sd", &SummaryStats::sd}};
    for (const auto& [label, field] : rows) {
      s += label;
      for (Process p : processes) (s += ',') += format_log10(summary.at(p).*field);
      s += '\n';
    }
    return s;
  }
};

// Final log10 values per seed. Seeds are distributed over `jobs` worker
// threads; results are stored by seed position so the output does not depend
// on scheduling.
inline SweepResult sweep_seeds(const ExperimentConfig& config, const std::vector<std::uint64_t>& seeds,
                               const std::vector<Process>& processes, unsigned jobs = 1) {
  if (seeds.empty()) throw UsageError("sweep: empty seed list");
  if (processes.empty()) throw UsageError("sweep: no processes requested");
  config.validate();

  std::vector<std::map<Process, double>> per_seed(seeds.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(seeds.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        ExperimentConfig c = config;
        c.seed = seeds[i];
        for (const auto& [p, t] : run_processes(c, processes)) per_seed[i][p] = t.final_log10();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(seeds.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SweepResult r;
  r.seeds = seeds;
  r.processes = processes;
  for (Process p : processes) {
    auto& column = r.finals[p];
    for (const auto& row : per_seed) column.push_back(row.at(p));
    r.summary[p] = summarize(column);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Monte Carlo check of the test-martingale property.

struct MartingaleReport {
  std::string engine;
  double pi = 0.0;
  std::size_t n = 0;
  std::size_t reps = 0;
  double mean = 0.0;
  double std_error = 0.0;
  bool pass = false;

  nlohmann::ordered_json to_json() const {
    return {{"engine", engine}, {"pi", pi},           {"n", n},      {"reps", reps},
            {"mean", mean},     {"std_error", std_error}, {"pass", pass}};
  }
};

// Estimates E[S_n] under IID B(pi) data; passes iff |mean - 1| <= 3 SE.
// Replication r draws its observations and taus from (seed, substream, r).
// Engine parameters (J, R, G, and n_pre/pi0/pi1 for optimal_ctm) come from
// config.
inline MartingaleReport validate_martingale(std::string_view engine, double pi, std::size_t n, std::size_t reps,
                                            std::uint64_t seed, const ExperimentConfig& config = {}) {
  if (engine == "pseudo_ctm") {
    throw UsageError("pseudo_ctm is a conformal e-pseudomartingale, not a martingale; refusing to validate it");
  }
  if (engine != "simple_jumper" && engine != "sleeper_chooser" && engine != "optimal_ctm") {
    throw UsageError("validate: engine must be one of simple_jumper, sleeper_chooser, optimal_ctm; got '" +
                     std::string(engine) + "'");
  }
  if (!(pi >= 0.0 && pi <= 1.0)) throw UsageError("validate: pi must lie in [0,1]");
  if (n == 0) throw UsageError("validate: n must be positive");
  if (reps < 100) throw UsageError("validate: reps must be at least 100");
  config.validate();

  ExperimentConfig iid = config;
  iid.pi0 = pi;
  iid.pi1 = pi;
  iid.n_total = n;
  iid.n_pre = n;

  // Welford accumulation; S_N is heavy-tailed.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto index = static_cast<std::uint32_t>(r);
    RandomStream data_stream(seed, Substream::observations, index);
    RandomStream tau_stream(seed, Substream::tie_breaking, index);
    const BinarySequence seq = generate_sequence(iid, data_stream);
    const PValueSequence pv = pvalue_sequence(seq, tau_stream);
    double final_log10 = 0.0;
    if (engine == "simple_jumper") {
      final_log10 = simple_jumper(pv, config.jumper_rate).final_log10();
    } else if (engine == "sleeper_chooser") {
      final_log10 = sleeper_chooser(pv, config.share_rate, config.grid_size).final_log10();
    } else {
      final_log10 = optimal_ctm(pv, config).final_log10();
    }
    const double s = std::pow(10.0, final_log10);
    const double delta = s - mean;
    mean += delta / static_cast<double>(r + 1);
    m2 += delta * (s - mean);
  }
  MartingaleReport report;
  report.engine = std::string(engine);
  report.pi = pi;
  report.n = n;
  report.reps = reps;
  report.mean = mean;
  report.std_error = std::sqrt(m2 / static_cast<double>(reps - 1) / static_cast<double>(reps));
  report.pass = std::abs(report.mean - 1.0) <= 3.0 * report.std_error;
  return report;
}

}  // namespace ctmlab
