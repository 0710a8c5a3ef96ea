#include "moon/planners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "moon/rng.hpp"

namespace moon {

namespace {

GraphParams graph_params(const EpisodeConfig& cfg) {
  GraphParams gp;
  gp.short_range_m = cfg.sensors.short_range_m;
  gp.viewpoint_radius_m = cfg.effective_visit_radius();
  return gp;
}

/// Moves the plan cursor past nodes that no longer need a visit.
void skip_finished(EpisodeState& state) {
  ActivePlan& plan = *state.plan;
  const Cell here = state.robot_cell();
  while (plan.progress < plan.solution.path.size()) {
    const GraphNode& node = plan.graph.nodes[static_cast<std::size_t>(plan.solution.path[plan.progress])];
    const bool done = node.cell == here || (node.kind == NodeKind::Landmark && state.belief.is_visited(node.source));
    if (!done) break;
    ++plan.progress;
  }
}

bool exhausted(const EpisodeState& state) {
  return !state.plan || state.plan->progress >= state.plan->solution.path.size();
}

Cell current_target(const EpisodeState& state) {
  const ActivePlan& plan = *state.plan;
  return plan.graph.nodes[static_cast<std::size_t>(plan.solution.path[plan.progress])].cell;
}

}  // namespace

NextWaypoint frontier_step(EpisodeState& state) {
  const Cell here = state.robot_cell();
  if (state.frontier_goal && *state.frontier_goal != here && is_frontier_cell(state.belief, *state.frontier_goal)) {
    return NextWaypoint::at(*state.frontier_goal);
  }
  state.frontier_goal.reset();
  const auto frontiers = frontier_clusters(state.belief);
  if (frontiers.empty()) return NextWaypoint::fail("no frontiers remain");

  const DistanceField field = dijkstra(state.belief.passable(), here, state.belief.resolution());
  std::optional<Cell> best;
  Pose best_centroid;
  double best_dist = kUnreachable;
  for (const FrontierCluster& fc : frontiers) {
    std::optional<Cell> anchor;
    double anchor_gap = 0.0;
    for (const Cell& c : fc.cells) {
      if (!field.reached(c)) continue;
      const double gap = distance(state.belief.center(c), fc.centroid);
      if (!anchor || gap < anchor_gap - 1e-12) {
        anchor = c;
        anchor_gap = gap;
      }
    }
    if (!anchor) continue;
    const double d = field.dist[*anchor];
    const bool tie = best && std::abs(d - best_dist) <= 1e-9;
    const bool lower_centroid = tie && (fc.centroid.y_m != best_centroid.y_m ? fc.centroid.y_m < best_centroid.y_m
                                                                             : fc.centroid.x_m < best_centroid.x_m);
    if (!best || (!tie && d < best_dist) || lower_centroid) {
      best = anchor;
      best_dist = d;
      best_centroid = fc.centroid;
    }
  }
  if (!best) return NextWaypoint::fail("no reachable frontier");
  state.frontier_goal = best;
  return NextWaypoint::at(*best);
}

NextWaypoint moon_step(EpisodeState& state, const MoonParams& params, const EpisodeConfig& cfg,
                       const Workspace& ws) {
  if (params.explore_weight < 0) throw ConfigError("explore weight must be non-negative");
  bool replan = !state.plan;
  if (params.replan_trigger == ReplanTrigger::OnNewLandmark && state.new_landmarks) replan = true;
  state.new_landmarks = false;
  if (state.plan) {
    skip_finished(state);
    if (exhausted(state)) {
      if (params.replan_trigger == ReplanTrigger::Never) return NextWaypoint::fail("plan exhausted");
      replan = true;
    }
  }
  if (!replan) return NextWaypoint::at(current_target(state));
  if (params.replan_trigger == ReplanTrigger::Never && state.replans > 0) return NextWaypoint::fail("plan exhausted");

  const auto frontiers = frontier_clusters(state.belief);
  NavGraph graph = build_graph(state.belief, state.robot, graph_params(cfg), frontiers);
  const double budget =
      params.budget_m > 0 ? params.budget_m : (cfg.effective_step_cap(ws) - state.step) * ws.resolution();
  if (budget <= 0) return NextWaypoint::fail("step budget exhausted");
  SopInstance inst = make_sop_instance(graph, budget, params.explore_weight);

  const bool any_reward = std::any_of(inst.rewards.begin(), inst.rewards.end(), [](double r) { return r > 0; });
  if (!any_reward) {
    const bool has_frontier = std::any_of(graph.nodes.begin(), graph.nodes.end(),
                                          [](const GraphNode& n) { return n.kind == NodeKind::Frontier; });
    state.plan.reset();
    if (has_frontier) return frontier_step(state);
    return NextWaypoint::fail("workspace exhausted");
  }

  SopSolution sol = decision_clusters(inst) <= cfg.exact_cluster_limit
                        ? solve_exact(inst, ExactOptions{cfg.exact_cluster_limit, {}})
                        : solve_vns(inst, mix64(cfg.solver_seed ^ static_cast<std::uint64_t>(state.replans)),
                                    cfg.vns_iterations);
  ++state.replans;
  state.pending_events.emplace_back("replan");
  state.plan = ActivePlan{std::move(graph), std::move(inst), std::move(sol), 1};
  skip_finished(state);
  if (exhausted(state)) return NextWaypoint::fail("no affordable node");
  return NextWaypoint::at(current_target(state));
}

NextWaypoint tsp_step(EpisodeState& state, const EpisodeConfig& cfg) {
  bool pending = false;
  for (const auto& [id, lm] : state.belief.observed_landmarks()) {
    if (!state.belief.is_visited(id)) pending = true;
  }
  if (!pending) {
    state.plan.reset();
    return frontier_step(state);
  }
  bool replan = !state.plan || state.new_landmarks;
  state.new_landmarks = false;
  if (state.plan) {
    skip_finished(state);
    if (exhausted(state)) replan = true;
  }
  if (!replan) return NextWaypoint::at(current_target(state));

  NavGraph graph = build_graph(state.belief, state.robot, graph_params(cfg));
  // one viewpoint per landmark: the cheapest to reach from the robot
  std::vector<int> chosen{0};
  for (std::size_t i = 1; i < graph.nodes.size(); ++i) {
    const int source = graph.nodes[i].source;
    auto same = std::find_if(chosen.begin() + 1, chosen.end(), [&](int j) {
      return graph.nodes[static_cast<std::size_t>(j)].source == source;
    });
    if (same == chosen.end()) {
      chosen.push_back(static_cast<int>(i));
    } else if (graph.cost(0, i) < graph.cost(0, static_cast<std::size_t>(*same)) - 1e-12) {
      *same = static_cast<int>(i);
    }
  }
  if (chosen.size() == 1) {
    state.plan.reset();
    return frontier_step(state);
  }
  CostMatrix sub(chosen.size());
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    for (std::size_t j = 0; j < chosen.size(); ++j) {
      sub(i, j) = graph.cost(static_cast<std::size_t>(chosen[i]), static_cast<std::size_t>(chosen[j]));
    }
  }
  std::vector<int> path;
  for (int k : tsp_path(sub, 0)) path.push_back(chosen[static_cast<std::size_t>(k)]);

  SopInstance inst = make_sop_instance(graph, std::numeric_limits<double>::max(), 0.0);
  SopSolution sol = make_solution(inst, path);
  ++state.replans;
  state.pending_events.emplace_back("replan");
  state.plan = ActivePlan{std::move(graph), std::move(inst), std::move(sol), 1};
  skip_finished(state);
  if (exhausted(state)) {
    state.plan.reset();
    return frontier_step(state);
  }
  return NextWaypoint::at(current_target(state));
}

double path_cost(const CostMatrix& cost, const std::vector<int>& order) {
  double total = 0.0;
  for (std::size_t i = 1; i < order.size(); ++i) {
    total += cost(static_cast<std::size_t>(order[i - 1]), static_cast<std::size_t>(order[i]));
  }
  return total;
}

std::vector<int> tsp_path(const CostMatrix& cost, int start) {
  const std::size_t n = cost.size();
  if (start < 0 || static_cast<std::size_t>(start) >= n) throw std::invalid_argument("tsp start out of range");
  std::vector<int> order{start};
  std::vector<char> used(n, 0);
  used[static_cast<std::size_t>(start)] = 1;
  for (std::size_t k = 1; k < n; ++k) {
    const auto last = static_cast<std::size_t>(order.back());
    int best = -1;
    for (std::size_t v = 0; v < n; ++v) {
      if (used[v]) continue;
      if (best < 0 || cost(last, v) < cost(last, static_cast<std::size_t>(best))) best = static_cast<int>(v);
    }
    used[static_cast<std::size_t>(best)] = 1;
    order.push_back(best);
  }

  double current = path_cost(cost, order);
  for (bool improved = true; improved;) {
    improved = false;
    for (std::size_t i = 1; i + 1 < order.size(); ++i) {
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        std::vector<int> candidate = order;
        std::reverse(candidate.begin() + static_cast<std::ptrdiff_t>(i),
                     candidate.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        const double c = path_cost(cost, candidate);
        if (c < current - 1e-9) {
          order = std::move(candidate);
          current = c;
          improved = true;
        }
      }
    }
  }
  return order;
}

}  // namespace moon
