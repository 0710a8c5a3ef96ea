#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "moon/planners.hpp"
#include "moon/world.hpp"

namespace moon {

/// Ground-truth shortest path length between the cells of two poses.
/// Throws std::logic_error when they are disconnected.
double shortest_path_length(const Workspace& ws, const Pose& start, const Pose& target);

/// Shortest length from `start` to any free cell within `radius_cells`
/// (Chebyshev) of the target cell: the least travel that can end an episode.
double shortest_path_length_to_region(const Workspace& ws, const Pose& start, const Pose& target, int radius_cells);

struct EpisodeResult {
  std::size_t config = 0;  // index into SplReport::configs
  std::string planner;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  bool success = false;
  double traveled_m = 0.0;  // p_i
  double shortest_m = 0.0;  // l_i
  int steps = 0;
  std::string failure;
};

/// (1/N) sum S_i * l_i / max(p_i, l_i). Throws std::invalid_argument on an
/// empty list.
double compute_spl(const std::vector<EpisodeResult>& results);

struct ConfigKey {
  double long_range_m = 100.0;
  double short_range_m = 3.0;
  std::size_t landmarks = 10;

  friend bool operator==(const ConfigKey&, const ConfigKey&) = default;
};

struct BenchmarkConfig {
  std::vector<double> long_range_m{100.0};
  std::vector<double> short_range_m{3.0};
  std::vector<std::size_t> landmarks{10};
  std::size_t trials = 100;
  std::uint64_t base_seed = 1;
  std::vector<std::string> planners{"frontier", "moon"};
  WorldParams world;
  PlacementParams placement;
  EpisodeConfig episode;  // sensor ranges are overwritten per config
  double explore_weight = 0.5;
  std::size_t workers = 1;

  void validate() const;
  std::vector<ConfigKey> configs() const;
};

/// Reads the JSON form; missing keys keep their defaults. Throws ConfigError.
BenchmarkConfig parse_benchmark_config(const std::string& json_text);
BenchmarkConfig load_benchmark_config(const std::filesystem::path& path);

struct SummaryRow {
  std::size_t config = 0;
  std::string planner;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double spl = 0.0;
};

struct SplReport {
  std::vector<ConfigKey> configs;
  std::vector<std::string> planners;
  std::vector<EpisodeResult> trials;  // ordered by (config, trial, planner)
  std::vector<SummaryRow> summary;    // ordered by (config, planner)

  double spl(std::size_t config, const std::string& planner) const;
};

inline std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial) {
  return base_seed ^ static_cast<std::uint64_t>(trial);
}

/// Runs one trial of one config for every planner on a shared world.
std::vector<EpisodeResult> run_trial(const BenchmarkConfig& cfg, std::size_t config_index, std::size_t trial);

SplReport run_benchmark(const BenchmarkConfig& cfg);

/// Recomputes the summary rows from `trials`.
void summarize(SplReport& report);

void write_per_trial_csv(std::ostream& out, const SplReport& report);
void write_summary_csv(std::ostream& out, const SplReport& report);
void write_chart_svg(std::ostream& out, const SplReport& report);

/// Writes per_trial.csv, summary.csv and spl.svg into `out_dir` (created if
/// missing). Throws std::runtime_error naming the failing path.
void emit_report(const SplReport& report, const std::filesystem::path& out_dir);

/// Parses write_per_trial_csv output back into results (config indices are
/// assigned in order of first appearance).
std::vector<EpisodeResult> read_per_trial_csv(std::istream& in);

}  // namespace moon
