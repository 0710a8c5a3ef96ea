#pragma once

#include <cstdint>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "moon/grid.hpp"
#include "moon/grid_path.hpp"

namespace moon {

/// Raised for parameter sets that cannot produce a valid world or placement.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CellKind : std::uint8_t { Free, Wall };

enum class Side : std::uint8_t { North, South, East, West };

/// Layout parameters. Sizes in meters; rooms are tiled inside a perimeter
/// corridor and separated by one-cell walls.
struct WorldParams {
  double width_m = 300.0;
  double height_m = 300.0;
  double resolution_m = 1.0;
  double room_min_m = 20.0;
  double room_max_m = 40.0;
  double corridor_m = 3.0;
  int door_width_cells = 2;

  /// 60 x 60 m layout used by unit tests and smoke runs.
  static WorldParams desk_scale();

  /// Throws ConfigError on non-positive sizes, non-integral cell counts or
  /// rooms that cannot fit.
  void validate() const;
};

struct Door {
  Side side = Side::North;
  Cell first;  // first opened wall cell; the door extends along the wall
  int width = 0;
};

/// Interior cells [min, max] inclusive.
struct Room {
  Cell min;
  Cell max;
  std::vector<Door> doors;
};

class Workspace {
 public:
  Workspace() = default;
  Workspace(WorldParams params, std::uint64_t seed, Grid<CellKind> cells, std::vector<Room> rooms);

  const WorldParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }
  int cols() const { return cells_.cols(); }
  int rows() const { return cells_.rows(); }
  double resolution() const { return params_.resolution_m; }
  double width_m() const { return params_.width_m; }
  double height_m() const { return params_.height_m; }

  const Grid<CellKind>& cells() const { return cells_; }
  const std::vector<Room>& rooms() const { return rooms_; }

  bool in_bounds(const Cell& c) const { return cells_.in_bounds(c); }
  bool in_bounds(const Pose& p) const;
  bool is_free(const Cell& c) const { return in_bounds(c) && cells_[c] == CellKind::Free; }

  Cell cell_of(const Pose& p) const;
  Pose center(const Cell& c) const;

  /// Ground-truth traversability for path planning.
  PassableGrid passable() const;

 private:
  WorldParams params_;
  std::uint64_t seed_ = 0;
  Grid<CellKind> cells_;
  std::vector<Room> rooms_;
};

Workspace generate_workspace(std::uint64_t seed, const WorldParams& params);

/// True iff the segment a->b crosses no Wall cell (supercover traversal:
/// segments through a cell corner touch all cells sharing that corner).
bool line_of_sight(const Workspace& ws, const Pose& a, const Pose& b);

/// Visits every cell touched by the segment a->b in traversal order until
/// `visit` returns false. Coordinates are in meters on a grid of the given
/// resolution. Returns false iff traversal was stopped early.
template <typename Visit>
bool traverse_segment(const Pose& a, const Pose& b, double resolution_m, Visit&& visit);

/// '.' for Free, '#' for Wall; one text row per grid row, top row first is y = 0.
std::string dump_grid(const Workspace& ws);
/// Parses dump_grid output into a workspace with the given resolution.
Workspace parse_grid(const std::string& text, double resolution_m = 1.0);

/// Fraction of Free cells reachable from the first Free cell (8-connected,
/// no corner cutting). 1.0 for a connected workspace.
double free_space_coverage(const Workspace& ws);

double wall_fraction(const Workspace& ws);

// ---------------------------------------------------------------------------

struct Landmark {
  int id = 0;
  Pose pose;
  double relevance = 1.0;
};

enum class TargetMode : std::uint8_t {
  NearLandmark,  // target within target_spread_m of a relevance-weighted landmark
  Uniform,       // target anywhere in free space
};

struct PlacementParams {
  double min_landmark_separation_cells = 2.0;
  double short_range_m = 3.0;  // target must start outside this radius of the robot
  TargetMode target_mode = TargetMode::NearLandmark;
  double target_spread_m = 1.0;
  bool allow_target_on_landmark = false;
  bool uniform_relevance = true;  // false: relevance ~ U[0.5, 1.0]
};

struct EntityPlacement {
  std::vector<Landmark> landmarks;
  Pose target;
  Pose start;
  int target_landmark = -1;  // id of the landmark the target was placed near, -1 if none
};

EntityPlacement place_entities(std::uint64_t seed, const Workspace& ws, std::size_t m,
                               const PlacementParams& params = {});

// ---------------------------------------------------------------------------

template <typename Visit>
bool traverse_segment(const Pose& a, const Pose& b, double resolution_m, Visit&& visit) {
  const double x0 = a.x_m / resolution_m;
  const double y0 = a.y_m / resolution_m;
  const double x1 = b.x_m / resolution_m;
  const double y1 = b.y_m / resolution_m;
  int ix = static_cast<int>(std::floor(x0));
  int iy = static_cast<int>(std::floor(y0));
  const int ex = static_cast<int>(std::floor(x1));
  const int ey = static_cast<int>(std::floor(y1));
  const double dx = x1 - x0;
  const double dy = y1 - y0;
  const int sx = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int sy = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double t_delta_x = sx != 0 ? 1.0 / std::abs(dx) : kInf;
  const double t_delta_y = sy != 0 ? 1.0 / std::abs(dy) : kInf;
  double t_max_x = sx > 0 ? (ix + 1 - x0) / dx : (sx < 0 ? (x0 - ix) / -dx : kInf);
  double t_max_y = sy > 0 ? (iy + 1 - y0) / dy : (sy < 0 ? (y0 - iy) / -dy : kInf);
  constexpr double kCornerEps = 1e-9;

  const int max_steps = std::abs(ex - ix) + std::abs(ey - iy) + 2;
  for (int steps = 0; steps <= max_steps; ++steps) {
    if (!visit(Cell{ix, iy})) return false;
    if (ix == ex && iy == ey) break;
    if (std::abs(t_max_x - t_max_y) < kCornerEps) {
      if (!visit(Cell{ix + sx, iy})) return false;
      if (!visit(Cell{ix, iy + sy})) return false;
      ix += sx;
      iy += sy;
      t_max_x += t_delta_x;
      t_max_y += t_delta_y;
    } else if (t_max_x < t_max_y) {
      ix += sx;
      t_max_x += t_delta_x;
    } else {
      iy += sy;
      t_max_y += t_delta_y;
    }
  }
  return true;
}

}  // namespace moon
