#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "moon/grid.hpp"
#include "moon/sensing.hpp"
#include "moon/sop_instance.hpp"

namespace moon {

enum class NodeKind { Start, Landmark, Frontier };

struct GraphNode {
  int id = 0;
  Cell cell;
  Pose pose;
  NodeKind kind = NodeKind::Start;
  int source = -1;  // landmark id, or frontier cluster index; -1 for the start node
  double relevance = 0.0;
  std::size_t frontier_size = 0;
};

/// Viewpoint graph over the belief map. Node 0 is always the robot.
struct NavGraph {
  std::vector<GraphNode> nodes;
  CostMatrix cost;
  int start_node = 0;
};

struct GraphParams {
  double short_range_m = 3.0;
  /// Distance from the landmark at which viewpoints are placed; must be
  /// <= short_range_m. Negative means short_range_m.
  double viewpoint_radius_m = -1.0;
  /// Which landmarks are left out of the graph: the ones already visited, or
  /// additionally every landmark observed before `observed_cutoff_step`.
  bool exclude_observed_before_cutoff = false;
  int observed_cutoff_step = 0;
};

/// One viewpoint per compass direction for every unvisited observed landmark
/// (the farthest reachable known-Free cell along the ray, up to the viewpoint
/// radius), plus one node per frontier cluster (its reachable member cell
/// nearest the centroid). Unreachable candidates are dropped.
NavGraph build_graph(const BeliefMap& belief, const Pose& robot, const GraphParams& params,
                     std::span<const FrontierCluster> frontiers = {});

/// Shortest 8-connected path lengths over known-Free cells between every pair
/// of poses; kUnreachable when disconnected. Symmetric with a zero diagonal.
CostMatrix all_pairs_costs(const BeliefMap& belief, std::span<const Pose> nodes);

/// Landmark nodes carry their relevance, frontier nodes
/// w * size / largest_frontier_size, the start node 0. Open path (no end).
/// Throws InstanceError for a non-positive budget.
SopInstance make_sop_instance(const NavGraph& graph, double budget_m, double explore_weight);

}  // namespace moon
