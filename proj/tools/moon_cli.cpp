// Command-line front end: benchmark batches, single episodes, SOP solving and
// Pareto fronts.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "moon/harness.hpp"
#include "moon/moo.hpp"
#include "moon/planners.hpp"
#include "moon/sop.hpp"
#include "moon/sop_instance.hpp"
#include "moon/world.hpp"

namespace {

struct Overrides {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::vector<std::string> planners;
  std::size_t trials = 0;
  std::vector<double> L, R;
  std::vector<std::size_t> M;
  std::size_t workers = 0;
};

void add_common(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--config", o.config, "benchmark config (JSON)")->check(CLI::ExistingFile);
  cmd.add_option_function<std::uint64_t>(
      "--seed", [&o](const std::uint64_t& s) { o.seed = s, o.seed_set = true; }, "base seed");
  cmd.add_option("--L", o.L, "long-range sensor radius (m)");
  cmd.add_option("--R", o.R, "short-range sensor radius (m)");
  cmd.add_option("--M", o.M, "number of landmarks");
}

moon::BenchmarkConfig resolve(const Overrides& o) {
  moon::BenchmarkConfig cfg = o.config.empty() ? moon::BenchmarkConfig{} : moon::load_benchmark_config(o.config);
  if (o.seed_set) cfg.base_seed = o.seed;
  if (!o.planners.empty()) cfg.planners = o.planners;
  if (o.trials > 0) cfg.trials = o.trials;
  if (!o.L.empty()) cfg.long_range_m = o.L;
  if (!o.R.empty()) cfg.short_range_m = o.R;
  if (!o.M.empty()) cfg.landmarks = o.M;
  if (o.workers > 0) cfg.workers = o.workers;
  cfg.validate();
  return cfg;
}

int run_bench(const Overrides& o, const std::string& out_dir) {
  const moon::BenchmarkConfig cfg = resolve(o);
  const moon::SplReport report = moon::run_benchmark(cfg);
  moon::emit_report(report, out_dir);
  moon::write_summary_csv(std::cout, report);
  return 0;
}

int run_episode_cmd(const Overrides& o, const std::string& out) {
  moon::BenchmarkConfig cfg = resolve(o);
  if (cfg.planners.size() != 1) throw moon::ConfigError("episode takes exactly one --planner");
  const auto keys = cfg.configs();
  if (keys.size() != 1) throw moon::ConfigError("episode takes a single L, R and M");
  const moon::ConfigKey key = keys.front();

  const std::uint64_t seed = cfg.base_seed;
  const moon::Workspace ws = moon::generate_workspace(seed, cfg.world);
  moon::PlacementParams pp = cfg.placement;
  pp.short_range_m = key.short_range_m;
  const moon::EntityPlacement placement = moon::place_entities(seed, ws, key.landmarks, pp);

  moon::EpisodeConfig ecfg = cfg.episode;
  ecfg.sensors.long_range_m = key.long_range_m;
  ecfg.sensors.short_range_m = key.short_range_m;
  ecfg.target_spread_m = pp.target_spread_m;
  ecfg.solver_seed = seed;
  moon::PlannerKind planner = moon::parse_planner(cfg.planners.front());
  if (auto* m = std::get_if<moon::MoonParams>(&planner)) m->explore_weight = cfg.explore_weight;

  const moon::EpisodeOutcome outcome = moon::run_episode(ws, placement, planner, ecfg);
  const double shortest =
      moon::shortest_path_length_to_region(ws, placement.start, placement.target, ecfg.success_radius_cells);
  if (out.empty() || out == "-") {
    moon::write_trajectory_csv(std::cout, outcome.trajectory);
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write '" + out + "'");
    moon::write_trajectory_csv(f, outcome.trajectory);
  }
  std::cerr << "planner=" << cfg.planners.front() << " seed=" << seed << " success=" << outcome.success
            << " traveled_m=" << outcome.traveled_m << " shortest_m=" << shortest << " steps=" << outcome.steps
            << " replans=" << outcome.replans;
  if (!outcome.success) std::cerr << " failure=\"" << outcome.failure << '"';
  std::cerr << '\n';
  return 0;
}

int run_solve(const std::string& path, const std::string& solver, std::uint64_t seed, std::size_t iters) {
  const moon::SopInstance inst = moon::load_instance(path);
  auto report = [&](const char* name, const moon::SopSolution& sol) {
    std::cout << name << ' ';
    moon::write_solution(std::cout, sol);
    const auto check = moon::validate(inst, sol);
    for (const auto& v : check.violations) std::cout << "  violation " << moon::to_string(v.kind) << ": " << v.detail << '\n';
  };
  if (solver == "exact" || solver == "all") {
    if (solver == "exact" || moon::decision_clusters(inst) <= 12) report("exact", moon::solve_exact(inst));
  }
  if (solver == "greedy" || solver == "all") report("greedy", moon::solve_greedy(inst));
  if (solver == "vns" || solver == "all") report("vns", moon::solve_vns(inst, seed, iters));
  return 0;
}

int run_pareto(const std::string& path, const std::string& objectives, const std::string& grid, std::size_t points,
               const std::string& out) {
  const moon::SopInstance inst = moon::load_instance(path);
  std::vector<moon::Objective> objs;
  std::stringstream ss(objectives);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok == "reward") {
      objs.push_back(moon::Objective::Reward);
    } else if (tok == "cost") {
      objs.push_back(moon::Objective::Cost);
    } else if (tok == "detection") {
      objs.push_back(moon::Objective::Detection);
    } else {
      throw moon::ConfigError("unknown objective '" + tok + "'");
    }
  }
  moon::EpsilonGrid g;
  g.kind = grid == "uniform" ? moon::EpsilonGrid::Kind::Uniform : moon::EpsilonGrid::Kind::Adaptive;
  g.points = points;
  const moon::ParetoFront front = moon::pareto_enumerate(inst, objs, g);
  if (out.empty() || out == "-") {
    moon::write_front_csv(std::cout, front);
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write '" + out + "'");
    moon::write_front_csv(f, front);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Object-goal navigation planner and benchmark"};
  app.require_subcommand(1);

  Overrides bench_o, episode_o;
  std::string bench_out = "report", episode_out;

  auto* bench = app.add_subcommand("bench", "run a benchmark batch and write CSV/SVG reports");
  add_common(*bench, bench_o);
  bench->add_option("--planner", bench_o.planners, "planners to compare (moon, frontier, tsp)");
  bench->add_option("--trials", bench_o.trials, "trials per configuration");
  bench->add_option("--workers", bench_o.workers, "worker threads");
  bench->add_option("--out", bench_out, "report directory");

  auto* episode = app.add_subcommand("episode", "run one seeded episode and dump its trajectory");
  add_common(*episode, episode_o);
  std::string episode_planner = "moon";
  episode->add_option("--planner", episode_planner, "moon, frontier or tsp");
  episode->add_option("--out", episode_out, "trajectory CSV (default stdout)");

  auto* solve = app.add_subcommand("solve", "solve a SOP instance file");
  std::string solve_path, solver = "all";
  std::uint64_t solve_seed = 0;
  std::size_t iters = moon::kDefaultVnsIterations;
  solve->add_option("instance", solve_path, "instance file")->required()->check(CLI::ExistingFile);
  solve->add_option("--solver", solver, "exact, vns, greedy or all")
      ->check(CLI::IsMember({"exact", "vns", "greedy", "all"}));
  solve->add_option("--seed", solve_seed, "VNS seed");
  solve->add_option("--iters", iters, "VNS iterations");

  auto* pareto = app.add_subcommand("pareto", "enumerate a Pareto front for a SOP instance");
  std::string pareto_path, objectives = "reward,cost", grid = "adaptive", pareto_out;
  std::size_t points = 10;
  pareto->add_option("instance", pareto_path, "instance file")->required()->check(CLI::ExistingFile);
  pareto->add_option("--objectives", objectives, "comma-separated: reward, cost, detection");
  pareto->add_option("--grid", grid, "adaptive or uniform")->check(CLI::IsMember({"adaptive", "uniform"}));
  pareto->add_option("--points", points, "uniform grid points per bound");
  pareto->add_option("--out", pareto_out, "front CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bench) return run_bench(bench_o, bench_out);
    if (*episode) {
      episode_o.planners = {episode_planner};
      return run_episode_cmd(episode_o, episode_out);
    }
    if (*solve) return run_solve(solve_path, solver, solve_seed, iters);
    if (*pareto) return run_pareto(pareto_path, objectives, grid, points, pareto_out);
  } catch (const moon::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const moon::InstanceError& e) {
    std::cerr << "instance error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
