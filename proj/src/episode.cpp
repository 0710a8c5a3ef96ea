#include <algorithm>
#include <cmath>
#include <ostream>

#include "moon/planners.hpp"

namespace moon {

std::string planner_name(const PlannerKind& planner) {
  if (std::holds_alternative<MoonParams>(planner)) return "moon";
  if (std::holds_alternative<FrontierParams>(planner)) return "frontier";
  return "tsp";
}

PlannerKind parse_planner(const std::string& name) {
  if (name == "moon") return MoonParams{};
  if (name == "frontier") return FrontierParams{};
  if (name == "tsp") return TspParams{};
  throw ConfigError("unknown planner '" + name + "' (expected moon, frontier or tsp)");
}

void EpisodeConfig::validate() const {
  sensors.validate();
  if (success_radius_cells < 0) throw ConfigError("success radius must be non-negative");
  if (target_spread_m < 0) throw ConfigError("target spread must be non-negative");
  if (visit_radius_m > sensors.short_range_m) throw ConfigError("visit radius must not exceed the short range");
  if (exact_cluster_limit > 20) throw ConfigError("exact cluster limit above 20 is not supported");
  if (vns_iterations == 0) throw ConfigError("VNS needs at least one iteration");
}

int EpisodeConfig::effective_step_cap(const Workspace& ws) const {
  if (step_cap > 0) return step_cap;
  const double perimeter = 2.0 * (ws.width_m() + ws.height_m());
  return static_cast<int>(std::lround(4.0 * perimeter / ws.resolution()));
}

double EpisodeConfig::effective_visit_radius() const {
  if (visit_radius_m > 0) return visit_radius_m;
  const double r = sensors.short_range_m - target_spread_m;
  return r > 0 ? r : sensors.short_range_m;
}

EpisodeState initial_state(const Workspace& ws, const EntityPlacement& placement) {
  if (!ws.is_free(ws.cell_of(placement.start))) throw ConfigError("start pose is not on a free cell");
  EpisodeState state;
  state.belief = BeliefMap::blank_for(ws);
  state.robot = ws.center(ws.cell_of(placement.start));
  return state;
}

namespace {

/// Sense at the current pose and mark landmarks within the visit radius.
void observe(EpisodeState& state, EpisodeEvent& event, const Workspace& ws, const EntityPlacement& placement,
             const EpisodeConfig& cfg) {
  event.observation = sense(ws, placement, state.belief, state.robot, cfg.sensors);
  if (!event.observation.new_landmarks.empty()) state.new_landmarks = true;
  const double radius = cfg.effective_visit_radius();
  for (const auto& [id, lm] : state.belief.observed_landmarks()) {
    if (state.belief.is_visited(id)) continue;
    if (distance(state.robot, lm.pose) > radius + 1e-9) continue;
    if (cfg.sensors.occlusion && !line_of_sight(ws, state.robot, lm.pose)) continue;
    state.belief.mark_visited(id);
    event.visited.push_back(id);
  }
}

}  // namespace

EpisodeEvent advance(EpisodeState& state, const Cell& waypoint, const Workspace& ws,
                     const EntityPlacement& placement, const EpisodeConfig& cfg) {
  EpisodeEvent event;
  const Cell here = state.robot_cell();
  if (waypoint != here) {
    if (state.route.size() < 2 || state.route.front() != here || state.route.back() != waypoint) {
      auto path = shortest_path(state.belief.passable(), here, waypoint, ws.resolution());
      if (!path) {
        event.failure = "waypoint (" + std::to_string(waypoint.x) + " " + std::to_string(waypoint.y) +
                        ") unreachable over known free cells";
        state.route.clear();
        return event;
      }
      state.route = std::move(*path);
    }
    const Cell next = state.route[1];
    state.route.erase(state.route.begin());
    state.traveled_m += step_length(here, next, ws.resolution());
    state.robot = ws.center(next);
    event.moved = true;
  }
  ++state.step;
  observe(state, event, ws, placement, cfg);
  return event;
}

EpisodeOutcome run_episode(const Workspace& ws, const EntityPlacement& placement, const PlannerKind& planner,
                           const EpisodeConfig& cfg) {
  cfg.validate();
  EpisodeState state = initial_state(ws, placement);
  const int cap = cfg.effective_step_cap(ws);
  const Cell target = ws.cell_of(placement.target);
  EpisodeOutcome out;

  auto record = [&](const EpisodeEvent& event, bool detected, std::string extra) {
    std::string tags;
    auto add = [&](const std::string& t) {
      if (!tags.empty()) tags += ';';
      tags += t;
    };
    for (const auto& e : state.pending_events) add(e);
    state.pending_events.clear();
    for (int id : event.observation.new_landmarks) add("observe:" + std::to_string(id));
    for (int id : event.visited) add("visit:" + std::to_string(id));
    if (detected) add("detect");
    if (!extra.empty()) add(extra);
    out.trajectory.push_back({state.step, state.robot.x_m, state.robot.y_m, tags});
  };

  {
    EpisodeEvent first;
    observe(state, first, ws, placement, cfg);
    record(first, state.belief.target_found().has_value(), "start");
  }

  for (;;) {
    if (state.belief.target_found() && chebyshev(state.robot_cell(), target) <= cfg.success_radius_cells) {
      out.success = true;
      out.trajectory.back().event += out.trajectory.back().event.empty() ? "success" : ";success";
      break;
    }
    if (state.step >= cap) {
      out.failure = "step cap reached";
      break;
    }
    NextWaypoint next;
    if (state.belief.target_found()) {
      next = NextWaypoint::at(target);
    } else if (const auto* moon = std::get_if<MoonParams>(&planner)) {
      next = moon_step(state, *moon, cfg, ws);
    } else if (std::holds_alternative<FrontierParams>(planner)) {
      next = frontier_step(state);
    } else {
      next = tsp_step(state, cfg);
    }
    if (!next.cell) {
      out.failure = next.failure;
      break;
    }
    const bool had_target = state.belief.target_found().has_value();
    const EpisodeEvent event = advance(state, *next.cell, ws, placement, cfg);
    if (!event.failure.empty()) {
      out.failure = event.failure;
      break;
    }
    record(event, !had_target && state.belief.target_found().has_value(), {});
  }
  if (!out.success) {
    auto& last = out.trajectory.back().event;
    last += (last.empty() ? "fail:" : ";fail:") + out.failure;
  }
  out.traveled_m = state.traveled_m;
  out.steps = state.step;
  out.replans = state.replans;
  return out;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows) {
  const auto old = out.precision(17);
  out << "step,x,y,event\n";
  for (const TrajectoryRow& r : rows) out << r.step << ',' << r.x_m << ',' << r.y_m << ',' << r.event << '\n';
  out.precision(old);
}

}  // namespace moon
