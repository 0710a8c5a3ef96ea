#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "moon/grid.hpp"

namespace moon {

/// 1 = traversable, 0 = blocked.
using PassableGrid = Grid<std::uint8_t>;

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// Single-source shortest distances over an 8-connected grid. Diagonal moves
/// may not cut a blocked corner.
struct DistanceField {
  Grid<double> dist;
  Grid<std::int32_t> parent;  // linear index of predecessor, -1 at source / unreached

  bool reached(const Cell& c) const { return dist[c] < kUnreachable; }
  /// Cells from the source to `to` inclusive; empty if unreached.
  std::vector<Cell> path_to(const Cell& to) const;
};

/// Dijkstra from `source`. When `stop_after` is non-empty the search ends as
/// soon as every listed cell is settled (or the frontier empties).
DistanceField dijkstra(const PassableGrid& passable, Cell source, double resolution_m,
                       std::span<const Cell> stop_after = {});

/// A* with the octile heuristic; returns the cell sequence from `from` to `to`
/// inclusive, or nullopt when no path exists.
std::optional<std::vector<Cell>> shortest_path(const PassableGrid& passable, Cell from, Cell to,
                                               double resolution_m);

double path_length(std::span<const Cell> path, double resolution_m);

}  // namespace moon
