#include "moon/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace moon {

double shortest_path_length(const Workspace& ws, const Pose& start, const Pose& target) {
  return shortest_path_length_to_region(ws, start, target, 0);
}

double shortest_path_length_to_region(const Workspace& ws, const Pose& start, const Pose& target, int radius_cells) {
  const Cell s = ws.cell_of(start);
  const Cell t = ws.cell_of(target);
  if (!ws.is_free(s) || !ws.is_free(t)) throw std::invalid_argument("start and target must be on free cells");
  std::vector<Cell> region;
  for (int dy = -radius_cells; dy <= radius_cells; ++dy) {
    for (int dx = -radius_cells; dx <= radius_cells; ++dx) {
      const Cell c{t.x + dx, t.y + dy};
      if (ws.is_free(c)) region.push_back(c);
    }
  }
  const DistanceField field = dijkstra(ws.passable(), s, ws.resolution(), region);
  double best = kUnreachable;
  for (const Cell& c : region) best = std::min(best, field.dist[c]);
  if (best == kUnreachable) throw std::logic_error("start and target are disconnected");
  return best;
}

double compute_spl(const std::vector<EpisodeResult>& results) {
  if (results.empty()) throw std::invalid_argument("SPL of an empty result list is undefined");
  double sum = 0.0;
  for (const EpisodeResult& r : results) {
    if (!r.success) continue;
    const double denom = std::max(r.traveled_m, r.shortest_m);
    sum += denom > 0 ? r.shortest_m / denom : 1.0;
  }
  return sum / static_cast<double>(results.size());
}

void BenchmarkConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (long_range_m.empty() || short_range_m.empty() || landmarks.empty()) {
    throw ConfigError("L, R and M lists must be non-empty");
  }
  for (double l : long_range_m)
    if (!(l > 0)) throw ConfigError("L must be positive");
  for (double r : short_range_m)
    if (!(r > 0)) throw ConfigError("R must be positive");
  for (std::size_t m : landmarks)
    if (m < 1) throw ConfigError("M must be positive");
  for (double l : long_range_m)
    for (double r : short_range_m)
      if (!(l > r)) throw ConfigError("every L must exceed every R");
  if (planners.empty()) throw ConfigError("planner list is empty");
  for (const auto& p : planners) parse_planner(p);
  if (explore_weight < 0) throw ConfigError("explore weight must be non-negative");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  world.validate();
}

std::vector<ConfigKey> BenchmarkConfig::configs() const {
  std::vector<ConfigKey> out;
  for (double l : long_range_m)
    for (double r : short_range_m)
      for (std::size_t m : landmarks) out.push_back({l, r, m});
  return out;
}

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <typename T>
void read_list(const json& j, const char* key, std::vector<T>& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  out = v.is_array() ? v.get<std::vector<T>>() : std::vector<T>{v.get<T>()};
}

}  // namespace

BenchmarkConfig parse_benchmark_config(const std::string& json_text) {
  BenchmarkConfig cfg;
  try {
    const json j = json::parse(json_text);
    check_keys(j,
               {"L", "R", "M", "trials", "base_seed", "planners", "workers", "explore_weight", "occlusion", "world",
                "placement", "episode"},
               "benchmark config");
    read_list(j, "L", cfg.long_range_m);
    read_list(j, "R", cfg.short_range_m);
    read_list(j, "M", cfg.landmarks);
    read(j, "trials", cfg.trials);
    read(j, "base_seed", cfg.base_seed);
    read_list(j, "planners", cfg.planners);
    read(j, "workers", cfg.workers);
    read(j, "explore_weight", cfg.explore_weight);
    read(j, "occlusion", cfg.episode.sensors.occlusion);
    if (j.contains("world")) {
      const json& w = j.at("world");
      check_keys(w, {"width_m", "height_m", "resolution_m", "room_min_m", "room_max_m", "corridor_m",
                     "door_width_cells"},
                 "world");
      read(w, "width_m", cfg.world.width_m);
      read(w, "height_m", cfg.world.height_m);
      read(w, "resolution_m", cfg.world.resolution_m);
      read(w, "room_min_m", cfg.world.room_min_m);
      read(w, "room_max_m", cfg.world.room_max_m);
      read(w, "corridor_m", cfg.world.corridor_m);
      read(w, "door_width_cells", cfg.world.door_width_cells);
    }
    if (j.contains("placement")) {
      const json& p = j.at("placement");
      check_keys(p, {"target_mode", "target_spread_m", "uniform_relevance", "min_landmark_separation_cells"},
                 "placement");
      if (p.contains("target_mode")) {
        const auto mode = p.at("target_mode").get<std::string>();
        if (mode == "near_landmark") {
          cfg.placement.target_mode = TargetMode::NearLandmark;
        } else if (mode == "uniform") {
          cfg.placement.target_mode = TargetMode::Uniform;
        } else {
          throw ConfigError("target_mode must be near_landmark or uniform");
        }
      }
      read(p, "target_spread_m", cfg.placement.target_spread_m);
      read(p, "uniform_relevance", cfg.placement.uniform_relevance);
      read(p, "min_landmark_separation_cells", cfg.placement.min_landmark_separation_cells);
    }
    if (j.contains("episode")) {
      const json& e = j.at("episode");
      check_keys(e, {"step_cap", "success_radius_cells", "exact_cluster_limit", "vns_iterations", "visit_radius_m"},
                 "episode");
      read(e, "step_cap", cfg.episode.step_cap);
      read(e, "success_radius_cells", cfg.episode.success_radius_cells);
      read(e, "exact_cluster_limit", cfg.episode.exact_cluster_limit);
      read(e, "vns_iterations", cfg.episode.vns_iterations);
      read(e, "visit_radius_m", cfg.episode.visit_radius_m);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad benchmark config: ") + e.what());
  }
  cfg.episode.target_spread_m = cfg.placement.target_spread_m;
  cfg.validate();
  return cfg;
}

BenchmarkConfig load_benchmark_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_benchmark_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

double SplReport::spl(std::size_t config, const std::string& planner) const {
  for (const SummaryRow& row : summary) {
    if (row.config == config && row.planner == planner) return row.spl;
  }
  throw std::out_of_range("no summary row for planner '" + planner + "'");
}

std::vector<EpisodeResult> run_trial(const BenchmarkConfig& cfg, std::size_t config_index, std::size_t trial) {
  const ConfigKey key = cfg.configs().at(config_index);
  const std::uint64_t seed = trial_seed(cfg.base_seed, trial);
  std::vector<EpisodeResult> out;
  auto base = [&](const std::string& planner) {
    EpisodeResult r;
    r.config = config_index;
    r.planner = planner;
    r.trial = trial;
    r.seed = seed;
    return r;
  };

  Workspace ws;
  EntityPlacement placement;
  double shortest = 0.0;
  EpisodeConfig ecfg = cfg.episode;
  ecfg.sensors.long_range_m = key.long_range_m;
  ecfg.sensors.short_range_m = key.short_range_m;
  ecfg.target_spread_m = cfg.placement.target_spread_m;
  ecfg.solver_seed = seed;
  try {
    ws = generate_workspace(seed, cfg.world);
    PlacementParams pp = cfg.placement;
    pp.short_range_m = key.short_range_m;
    placement = place_entities(seed, ws, key.landmarks, pp);
    shortest = shortest_path_length_to_region(ws, placement.start, placement.target, ecfg.success_radius_cells);
  } catch (const std::exception& e) {
    for (const auto& p : cfg.planners) {
      EpisodeResult r = base(p);
      r.failure = std::string("setup: ") + e.what();
      out.push_back(r);
    }
    return out;
  }

  for (const auto& name : cfg.planners) {
    EpisodeResult r = base(name);
    r.shortest_m = shortest;
    PlannerKind planner = parse_planner(name);
    if (auto* moon = std::get_if<MoonParams>(&planner)) moon->explore_weight = cfg.explore_weight;
    try {
      const EpisodeOutcome outcome = run_episode(ws, placement, planner, ecfg);
      r.success = outcome.success;
      r.traveled_m = outcome.traveled_m;
      r.steps = outcome.steps;
      r.failure = outcome.failure;
    } catch (const std::exception& e) {
      r.failure = std::string("error: ") + e.what();
    }
    out.push_back(r);
  }
  return out;
}

void summarize(SplReport& report) {
  report.summary.clear();
  for (std::size_t c = 0; c < report.configs.size(); ++c) {
    for (const auto& planner : report.planners) {
      std::vector<EpisodeResult> rows;
      for (const auto& r : report.trials) {
        if (r.config == c && r.planner == planner) rows.push_back(r);
      }
      if (rows.empty()) continue;
      SummaryRow s;
      s.config = c;
      s.planner = planner;
      s.trials = rows.size();
      s.successes = static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) {
        return r.success;
      }));
      s.spl = compute_spl(rows);
      report.summary.push_back(s);
    }
  }
}

SplReport run_benchmark(const BenchmarkConfig& cfg) {
  cfg.validate();
  SplReport report;
  report.configs = cfg.configs();
  report.planners = cfg.planners;

  const std::size_t tasks = report.configs.size() * cfg.trials;
  std::vector<std::vector<EpisodeResult>> slots(tasks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks;) {
      try {
        slots[t] = run_trial(cfg, t / cfg.trials, t % cfg.trials);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(cfg.workers, tasks);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  for (auto& slot : slots) {
    for (auto& r : slot) report.trials.push_back(std::move(r));
  }
  summarize(report);
  return report;
}

namespace {

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ' ');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

void write_per_trial_csv(std::ostream& out, const SplReport& report) {
  const auto old = out.precision(17);
  out << "L,R,M,planner,trial,seed,success,traveled_m,shortest_m,steps,failure\n";
  for (const EpisodeResult& r : report.trials) {
    const ConfigKey& k = report.configs.at(r.config);
    out << k.long_range_m << ',' << k.short_range_m << ',' << k.landmarks << ',' << r.planner << ',' << r.trial << ','
        << r.seed << ',' << (r.success ? 1 : 0) << ',' << r.traveled_m << ',' << r.shortest_m << ',' << r.steps << ','
        << csv_safe(r.failure) << '\n';
  }
  out.precision(old);
}

void write_summary_csv(std::ostream& out, const SplReport& report) {
  const auto old = out.precision(17);
  out << "L,R,M,planner,trials,successes,spl\n";
  for (const SummaryRow& s : report.summary) {
    const ConfigKey& k = report.configs.at(s.config);
    out << k.long_range_m << ',' << k.short_range_m << ',' << k.landmarks << ',' << s.planner << ',' << s.trials << ','
        << s.successes << ',' << s.spl << '\n';
  }
  out.precision(old);
}

void write_chart_svg(std::ostream& out, const SplReport& report) {
  const std::size_t groups = std::max<std::size_t>(report.configs.size(), 1);
  const std::size_t bars = std::max<std::size_t>(report.planners.size(), 1);
  const double bar_w = 24.0, gap = 20.0, left = 50.0, top = 20.0, plot_h = 200.0;
  const double group_w = static_cast<double>(bars) * bar_w + gap;
  const double width = left + static_cast<double>(groups) * group_w + 140.0;
  const double height = top + plot_h + 60.0;
  static const char* kColors[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3"};

  std::ostringstream svg;
  svg.precision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << width - 140 << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = tick * 0.25;
    const double y = top + plot_h * (1.0 - v);
    svg << "<text x=\"" << left - 6 << "\" y=\"" << y + 4 << "\" font-size=\"10\" text-anchor=\"end\">" << v
        << "</text>\n";
  }
  for (std::size_t c = 0; c < report.configs.size(); ++c) {
    const ConfigKey& k = report.configs[c];
    const double gx = left + gap / 2 + static_cast<double>(c) * group_w;
    for (std::size_t p = 0; p < report.planners.size(); ++p) {
      double value = 0.0;
      for (const SummaryRow& s : report.summary) {
        if (s.config == c && s.planner == report.planners[p]) value = s.spl;
      }
      const double h = plot_h * value;
      svg << "<rect x=\"" << gx + static_cast<double>(p) * bar_w << "\" y=\"" << top + plot_h - h << "\" width=\""
          << bar_w - 2 << "\" height=\"" << h << "\" fill=\"" << kColors[p % 5] << "\"/>\n";
    }
    svg << "<text x=\"" << gx << "\" y=\"" << top + plot_h + 16 << "\" font-size=\"9\">L" << k.long_range_m << " R"
        << k.short_range_m << " M" << k.landmarks << "</text>\n";
  }
  for (std::size_t p = 0; p < report.planners.size(); ++p) {
    const double ly = top + 14.0 * static_cast<double>(p);
    svg << "<rect x=\"" << width - 120 << "\" y=\"" << ly << "\" width=\"10\" height=\"10\" fill=\"" << kColors[p % 5]
        << "\"/><text x=\"" << width - 105 << "\" y=\"" << ly + 9 << "\" font-size=\"10\">" << report.planners[p]
        << "</text>\n";
  }
  svg << "<text x=\"" << left << "\" y=\"" << top - 6 << "\" font-size=\"11\">SPL</text>\n";
  svg << "</svg>\n";
  out << svg.str();
}

void emit_report(const SplReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + out_dir.string() + "': " + ec.message());
  auto write = [&](const char* name, auto&& fn) {
    const auto path = out_dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    fn(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
  };
  write("per_trial.csv", [&](std::ostream& o) { write_per_trial_csv(o, report); });
  write("summary.csv", [&](std::ostream& o) { write_summary_csv(o, report); });
  write("spl.svg", [&](std::ostream& o) { write_chart_svg(o, report); });
}

std::vector<EpisodeResult> read_per_trial_csv(std::istream& in) {
  std::vector<EpisodeResult> out;
  std::vector<std::string> keys;
  std::string line;
  if (!std::getline(in, line)) return out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() == 10) f.emplace_back();
    if (f.size() != 11) throw std::runtime_error("malformed per-trial row: " + line);
    const std::string key = f[0] + ',' + f[1] + ',' + f[2];
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) it = keys.insert(keys.end(), key);
    EpisodeResult r;
    r.config = static_cast<std::size_t>(it - keys.begin());
    r.planner = f[3];
    r.trial = std::stoul(f[4]);
    r.seed = std::stoull(f[5]);
    r.success = f[6] == "1";
    r.traveled_m = std::stod(f[7]);
    r.shortest_m = std::stod(f[8]);
    r.steps = std::stoi(f[9]);
    r.failure = f[10];
    out.push_back(r);
  }
  return out;
}

}  // namespace moon
