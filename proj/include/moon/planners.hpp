#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "moon/grid.hpp"
#include "moon/navgraph.hpp"
#include "moon/sensing.hpp"
#include "moon/sop.hpp"
#include "moon/world.hpp"

namespace moon {

enum class ReplanTrigger {
  OnNewLandmark,  // replan whenever a landmark is first observed, and when the plan runs out
  OnExhaustion,   // replan only when the plan runs out
  Never,          // one plan at the start; used as the no-replan ablation
};

struct MoonParams {
  double budget_m = 0.0;  // <= 0: remaining step budget times the resolution
  double explore_weight = 0.5;
  ReplanTrigger replan_trigger = ReplanTrigger::OnNewLandmark;
};
struct FrontierParams {};
struct TspParams {};

using PlannerKind = std::variant<MoonParams, FrontierParams, TspParams>;

std::string planner_name(const PlannerKind& planner);
/// "moon", "frontier" or "tsp"; throws ConfigError otherwise.
PlannerKind parse_planner(const std::string& name);

struct EpisodeConfig {
  SensorConfig sensors;
  int step_cap = 0;  // <= 0: 4 * workspace perimeter / resolution
  int success_radius_cells = 1;
  /// Landmarks count as visited within this radius; also the viewpoint radius.
  /// Negative: short range minus the target spread.
  double visit_radius_m = -1.0;
  double target_spread_m = 1.0;
  std::size_t exact_cluster_limit = 12;
  std::size_t vns_iterations = kDefaultVnsIterations;
  std::uint64_t solver_seed = 0;

  void validate() const;
  int effective_step_cap(const Workspace& ws) const;
  double effective_visit_radius() const;
};

struct ActivePlan {
  NavGraph graph;
  SopInstance instance;
  SopSolution solution;
  std::size_t progress = 1;  // index into solution.path of the node being approached
};

struct EpisodeState {
  BeliefMap belief;
  Pose robot;
  double traveled_m = 0.0;
  int step = 0;
  std::optional<ActivePlan> plan;
  std::optional<Cell> frontier_goal;
  bool new_landmarks = false;  // set by advance(), consumed by the planner
  int replans = 0;
  std::vector<Cell> route;  // cached grid path, route.back() is the waypoint
  std::vector<std::string> pending_events;

  Cell robot_cell() const { return belief.cell_of(robot); }
};

struct NextWaypoint {
  std::optional<Cell> cell;
  std::string failure;  // set when cell is empty

  static NextWaypoint at(Cell c) { return {c, {}}; }
  static NextWaypoint fail(std::string why) { return {std::nullopt, std::move(why)}; }
};

/// Robot placed at the start pose with nothing sensed yet.
EpisodeState initial_state(const Workspace& ws, const EntityPlacement& placement);

NextWaypoint moon_step(EpisodeState& state, const MoonParams& params, const EpisodeConfig& cfg,
                       const Workspace& ws);
NextWaypoint frontier_step(EpisodeState& state);
NextWaypoint tsp_step(EpisodeState& state, const EpisodeConfig& cfg);

/// Open Hamiltonian path from `start` over all nodes: nearest neighbour then
/// 2-opt. Returns the visiting order, starting with `start`.
std::vector<int> tsp_path(const CostMatrix& cost, int start);
double path_cost(const CostMatrix& cost, const std::vector<int>& order);

struct EpisodeEvent {
  bool moved = false;
  ObservationEvent observation;
  std::vector<int> visited;
  std::string failure;  // unreachable waypoint
};

/// One grid step toward `waypoint` over known-Free cells, then sense, then
/// mark landmarks within the visit radius as visited.
EpisodeEvent advance(EpisodeState& state, const Cell& waypoint, const Workspace& ws,
                     const EntityPlacement& placement, const EpisodeConfig& cfg);

struct TrajectoryRow {
  int step = 0;
  double x_m = 0.0;
  double y_m = 0.0;
  std::string event;  // ';'-separated tags: start, observe:<id>, visit:<id>, replan, detect, success, fail:<why>
};

struct EpisodeOutcome {
  bool success = false;
  double traveled_m = 0.0;
  int steps = 0;
  int replans = 0;
  std::string failure;
  std::vector<TrajectoryRow> trajectory;
};

EpisodeOutcome run_episode(const Workspace& ws, const EntityPlacement& placement, const PlannerKind& planner,
                           const EpisodeConfig& cfg);

/// CSV with header step,x,y,event.
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows);

}  // namespace moon
