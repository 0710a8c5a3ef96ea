#include "moon/navgraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "moon/grid_path.hpp"

namespace moon {

namespace {

constexpr int kCompassDx[4] = {1, 0, -1, 0};
constexpr int kCompassDy[4] = {0, 1, 0, -1};

}  // namespace

CostMatrix all_pairs_costs(const BeliefMap& belief, std::span<const Pose> nodes) {
  const std::size_t n = nodes.size();
  CostMatrix cost(n, kUnreachable);
  std::vector<Cell> cells;
  cells.reserve(n);
  for (const Pose& p : nodes) cells.push_back(belief.cell_of(p));

  for (std::size_t i = 0; i < n; ++i) {
    cost(i, i) = 0.0;
    if (i + 1 == n) break;
    const std::span<const Cell> rest(cells.begin() + static_cast<std::ptrdiff_t>(i + 1), cells.end());
    const DistanceField field = dijkstra(belief.passable(), cells[i], belief.resolution(), rest);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = belief.passable().in_bounds(cells[j]) ? field.dist[cells[j]] : kUnreachable;
      cost(i, j) = d;
      cost(j, i) = d;
    }
  }
  return cost;
}

NavGraph build_graph(const BeliefMap& belief, const Pose& robot, const GraphParams& params,
                     std::span<const FrontierCluster> frontiers) {
  const double res = belief.resolution();
  const double vp_radius = params.viewpoint_radius_m < 0
                               ? params.short_range_m
                               : std::min(params.viewpoint_radius_m, params.short_range_m);
  const Cell robot_cell = belief.cell_of(robot);
  const DistanceField from_robot = dijkstra(belief.passable(), robot_cell, res);
  auto reachable = [&](const Cell& c) { return belief.is_known_free(c) && from_robot.reached(c); };

  NavGraph graph;
  graph.nodes.push_back({0, robot_cell, robot, NodeKind::Start, -1, 0.0, 0});

  for (const auto& [id, lm] : belief.observed_landmarks()) {
    if (belief.is_visited(id)) continue;
    if (params.exclude_observed_before_cutoff && lm.observed_step < params.observed_cutoff_step) continue;
    const Cell lc = belief.cell_of(lm.pose);
    const int max_r = static_cast<int>(std::floor(vp_radius / res + 1e-9));
    std::vector<Cell> chosen;
    for (int d = 0; d < 4; ++d) {
      std::optional<Cell> best;
      for (int r = 0; r <= max_r; ++r) {
        const Cell c{lc.x + kCompassDx[d] * r, lc.y + kCompassDy[d] * r};
        if (!belief.is_known_free(c)) break;
        if (distance(belief.center(c), lm.pose) > params.short_range_m + 1e-9) break;
        if (reachable(c)) best = c;
      }
      if (best && std::find(chosen.begin(), chosen.end(), *best) == chosen.end()) chosen.push_back(*best);
    }
    for (const Cell& c : chosen) {
      graph.nodes.push_back({static_cast<int>(graph.nodes.size()), c, belief.center(c), NodeKind::Landmark,
                             id, lm.relevance, 0});
    }
  }

  for (std::size_t f = 0; f < frontiers.size(); ++f) {
    const FrontierCluster& fc = frontiers[f];
    std::optional<Cell> anchor;
    double best = 0.0;
    for (const Cell& c : fc.cells) {  // cells are (y, x) sorted, so ties keep the lowest
      if (!reachable(c)) continue;
      const double d = distance(belief.center(c), fc.centroid);
      if (!anchor || d < best - 1e-12) {
        anchor = c;
        best = d;
      }
    }
    if (!anchor) continue;
    graph.nodes.push_back({static_cast<int>(graph.nodes.size()), *anchor, belief.center(*anchor),
                           NodeKind::Frontier, static_cast<int>(f), 0.0, fc.size});
  }

  std::vector<Pose> poses;
  for (const GraphNode& node : graph.nodes) poses.push_back(belief.center(node.cell));
  poses.front() = belief.center(robot_cell);
  graph.cost = all_pairs_costs(belief, poses);
  return graph;
}

SopInstance make_sop_instance(const NavGraph& graph, double budget_m, double explore_weight) {
  if (!(budget_m > 0)) throw InstanceError("budget must be positive");
  if (explore_weight < 0) throw InstanceError("explore weight must be non-negative");
  const std::size_t n = graph.nodes.size();
  std::size_t largest_frontier = 0;
  for (const GraphNode& node : graph.nodes) {
    if (node.kind == NodeKind::Frontier) largest_frontier = std::max(largest_frontier, node.frontier_size);
  }

  SopInstance inst;
  inst.rewards.resize(n, 0.0);
  inst.detection.resize(n, 0.0);
  inst.cluster_of.resize(n, 0);
  inst.cost = graph.cost;
  inst.start = graph.start_node;
  inst.budget = budget_m;

  std::map<int, int> landmark_cluster;
  int next_cluster = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const GraphNode& node = graph.nodes[i];
    switch (node.kind) {
      case NodeKind::Start:
        inst.cluster_of[i] = next_cluster++;
        break;
      case NodeKind::Landmark: {
        auto [it, inserted] = landmark_cluster.emplace(node.source, next_cluster);
        if (inserted) ++next_cluster;
        inst.cluster_of[i] = it->second;
        inst.rewards[i] = node.relevance;
        inst.detection[i] = node.relevance;
        break;
      }
      case NodeKind::Frontier:
        inst.cluster_of[i] = next_cluster++;
        inst.rewards[i] = largest_frontier > 0
                              ? explore_weight * static_cast<double>(node.frontier_size) /
                                    static_cast<double>(largest_frontier)
                              : 0.0;
        break;
    }
  }
  return inst;
}

}  // namespace moon
