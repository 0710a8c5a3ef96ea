#include "moon/world.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "moon/rng.hpp"

namespace moon {

namespace {

int to_cells(double meters, double resolution, const char* what) {
  const double cells = meters / resolution;
  const double rounded = std::round(cells);
  if (std::abs(cells - rounded) > 1e-9) {
    throw ConfigError(std::string(what) + " is not a whole number of cells");
  }
  return static_cast<int>(rounded);
}

/// Splits a span of `length` cells into wall/room/wall/.../wall; returns the
/// interior widths of the rooms. Always starts and ends with a wall.
std::vector<int> split_span(int length, int min_room, int max_room, std::mt19937_64& rng) {
  std::vector<int> widths;
  int remaining = length - 1;  // leading wall
  while (remaining > 0) {
    if (remaining <= max_room + 1) {
      const int last = remaining - 1;
      if (last >= min_room || widths.empty()) {
        widths.push_back(last);
      } else {
        widths.back() += remaining;  // absorb the sliver into the previous room
      }
      break;
    }
    std::uniform_int_distribution<int> pick(min_room, max_room);
    int w = pick(rng);
    // keep the tail from becoming narrower than a room
    const int tail = remaining - (w + 1);
    if (tail > 0 && tail < min_room + 1) w = std::max(min_room, remaining - (min_room + 1) - 1);
    widths.push_back(w);
    remaining -= w + 1;
  }
  return widths;
}

}  // namespace

WorldParams WorldParams::desk_scale() {
  WorldParams p;
  p.width_m = 60.0;
  p.height_m = 60.0;
  p.room_min_m = 8.0;
  p.room_max_m = 15.0;
  p.corridor_m = 2.0;
  return p;
}

void WorldParams::validate() const {
  if (!(width_m > 0) || !(height_m > 0) || !(resolution_m > 0)) {
    throw ConfigError("workspace sizes and resolution must be positive");
  }
  if (!(room_min_m > 0) || room_max_m < room_min_m) {
    throw ConfigError("room size range must satisfy 0 < room_min_m <= room_max_m");
  }
  if (corridor_m < 0) throw ConfigError("corridor_m must be non-negative");
  if (door_width_cells < 1) throw ConfigError("door_width_cells must be >= 1");
  const int cols = to_cells(width_m, resolution_m, "width_m");
  const int rows = to_cells(height_m, resolution_m, "height_m");
  const int corridor = to_cells(corridor_m, resolution_m, "corridor_m");
  const int min_room = static_cast<int>(std::ceil(room_min_m / resolution_m - 1e-9));
  if (min_room < door_width_cells + 2) {
    throw ConfigError("room_min_m too small to hold a door");
  }
  const int span_x = cols - 2 * corridor;
  const int span_y = rows - 2 * corridor;
  if (span_x < min_room + 2 || span_y < min_room + 2) {
    throw ConfigError("rooms do not fit inside the workspace");
  }
}

Workspace::Workspace(WorldParams params, std::uint64_t seed, Grid<CellKind> cells,
                     std::vector<Room> rooms)
    : params_(params), seed_(seed), cells_(std::move(cells)), rooms_(std::move(rooms)) {}

bool Workspace::in_bounds(const Pose& p) const {
  return p.x_m >= 0 && p.y_m >= 0 && p.x_m < cols() * resolution() && p.y_m < rows() * resolution();
}

Cell Workspace::cell_of(const Pose& p) const {
  return {static_cast<int>(std::floor(p.x_m / resolution())),
          static_cast<int>(std::floor(p.y_m / resolution()))};
}

Pose Workspace::center(const Cell& c) const {
  return {(c.x + 0.5) * resolution(), (c.y + 0.5) * resolution()};
}

PassableGrid Workspace::passable() const {
  PassableGrid g(cols(), rows(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = cells_[i] == CellKind::Free ? 1 : 0;
  return g;
}

Workspace generate_workspace(std::uint64_t seed, const WorldParams& params) {
  params.validate();
  const double res = params.resolution_m;
  const int cols = to_cells(params.width_m, res, "width_m");
  const int rows = to_cells(params.height_m, res, "height_m");
  const int corridor = to_cells(params.corridor_m, res, "corridor_m");
  const int min_room = static_cast<int>(std::ceil(params.room_min_m / res - 1e-9));
  const int max_room = std::max(min_room, static_cast<int>(std::floor(params.room_max_m / res + 1e-9)));

  std::mt19937_64 rng(derive_seed(seed, StreamTag::Layout));
  const std::vector<int> widths = split_span(cols - 2 * corridor, min_room, max_room, rng);
  const std::vector<int> heights = split_span(rows - 2 * corridor, min_room, max_room, rng);

  Grid<CellKind> cells(cols, rows, CellKind::Free);
  // wall lines, x positions then y positions
  std::vector<int> wall_x{corridor};
  for (int w : widths) wall_x.push_back(wall_x.back() + w + 1);
  std::vector<int> wall_y{corridor};
  for (int h : heights) wall_y.push_back(wall_y.back() + h + 1);

  const int x_lo = wall_x.front(), x_hi = wall_x.back();
  const int y_lo = wall_y.front(), y_hi = wall_y.back();
  for (int x : wall_x)
    for (int y = y_lo; y <= y_hi; ++y) cells[Cell{x, y}] = CellKind::Wall;
  for (int y : wall_y)
    for (int x = x_lo; x <= x_hi; ++x) cells[Cell{x, y}] = CellKind::Wall;

  std::vector<Room> rooms;
  const int dw = params.door_width_cells;
  for (std::size_t j = 0; j + 1 < wall_y.size(); ++j) {
    for (std::size_t i = 0; i + 1 < wall_x.size(); ++i) {
      Room room{{wall_x[i] + 1, wall_y[j] + 1}, {wall_x[i + 1] - 1, wall_y[j + 1] - 1}, {}};
      const int len_x = room.max.x - room.min.x + 1;
      const int len_y = room.max.y - room.min.y + 1;
      std::uniform_int_distribution<int> off_x(0, len_x - dw);
      std::uniform_int_distribution<int> off_y(0, len_y - dw);
      room.doors.push_back({Side::North, {room.min.x + off_x(rng), wall_y[j]}, dw});
      room.doors.push_back({Side::South, {room.min.x + off_x(rng), wall_y[j + 1]}, dw});
      room.doors.push_back({Side::West, {wall_x[i], room.min.y + off_y(rng)}, dw});
      room.doors.push_back({Side::East, {wall_x[i + 1], room.min.y + off_y(rng)}, dw});
      for (const Door& d : room.doors) {
        const bool horizontal = d.side == Side::North || d.side == Side::South;
        for (int k = 0; k < d.width; ++k) {
          const Cell c = horizontal ? Cell{d.first.x + k, d.first.y} : Cell{d.first.x, d.first.y + k};
          cells[c] = CellKind::Free;
        }
      }
      rooms.push_back(std::move(room));
    }
  }
  return Workspace(params, seed, std::move(cells), std::move(rooms));
}

bool line_of_sight(const Workspace& ws, const Pose& a, const Pose& b) {
  return traverse_segment(a, b, ws.resolution(), [&](const Cell& c) {
    return !ws.in_bounds(c) || ws.cells()[c] == CellKind::Free;
  });
}

std::string dump_grid(const Workspace& ws) {
  std::string out;
  out.reserve(static_cast<std::size_t>(ws.cols() + 1) * ws.rows());
  for (int y = 0; y < ws.rows(); ++y) {
    for (int x = 0; x < ws.cols(); ++x) out.push_back(ws.is_free({x, y}) ? '.' : '#');
    out.push_back('\n');
  }
  return out;
}

Workspace parse_grid(const std::string& text, double resolution_m) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw ConfigError("empty grid");
  const int cols = static_cast<int>(lines.front().size());
  const int rows = static_cast<int>(lines.size());
  Grid<CellKind> cells(cols, rows, CellKind::Free);
  for (int y = 0; y < rows; ++y) {
    if (static_cast<int>(lines[y].size()) != cols) throw ConfigError("ragged grid rows");
    for (int x = 0; x < cols; ++x) {
      const char ch = lines[y][x];
      if (ch == '#') {
        cells[Cell{x, y}] = CellKind::Wall;
      } else if (ch != '.') {
        throw ConfigError(std::string("unexpected grid character '") + ch + "'");
      }
    }
  }
  WorldParams params;
  params.width_m = cols * resolution_m;
  params.height_m = rows * resolution_m;
  params.resolution_m = resolution_m;
  params.corridor_m = 0.0;
  return Workspace(params, 0, std::move(cells), {});
}

double free_space_coverage(const Workspace& ws) {
  const PassableGrid passable = ws.passable();
  std::size_t free_count = 0;
  std::optional<Cell> first;
  for (std::size_t i = 0; i < passable.size(); ++i) {
    if (passable[i]) {
      ++free_count;
      if (!first) first = passable.cell(i);
    }
  }
  if (free_count == 0) return 0.0;
  const DistanceField field = dijkstra(passable, *first, ws.resolution());
  std::size_t reached = 0;
  for (std::size_t i = 0; i < passable.size(); ++i) {
    if (passable[i] && field.dist[i] < kUnreachable) ++reached;
  }
  return static_cast<double>(reached) / static_cast<double>(free_count);
}

double wall_fraction(const Workspace& ws) {
  const auto& data = ws.cells().data();
  const auto walls = std::count(data.begin(), data.end(), CellKind::Wall);
  return static_cast<double>(walls) / static_cast<double>(data.size());
}

EntityPlacement place_entities(std::uint64_t seed, const Workspace& ws, std::size_t m,
                               const PlacementParams& params) {
  std::vector<Cell> free_cells;
  for (int y = 0; y < ws.rows(); ++y)
    for (int x = 0; x < ws.cols(); ++x)
      if (ws.is_free({x, y})) free_cells.push_back({x, y});
  if (free_cells.size() < m + 2) throw ConfigError("not enough free cells for placement");

  std::mt19937_64 rng(derive_seed(seed, StreamTag::Placement));
  std::uniform_int_distribution<std::size_t> pick(0, free_cells.size() - 1);
  std::uniform_real_distribution<double> relevance(0.5, 1.0);

  EntityPlacement out;
  std::vector<Cell> landmark_cells;
  const std::size_t max_attempts = 1000 * (m + 1);
  std::size_t attempts = 0;
  while (landmark_cells.size() < m) {
    if (++attempts > max_attempts) throw ConfigError("cannot separate landmarks; lower m or separation");
    const Cell c = free_cells[pick(rng)];
    const bool separated = std::all_of(landmark_cells.begin(), landmark_cells.end(), [&](const Cell& o) {
      return std::hypot(c.x - o.x, c.y - o.y) >= params.min_landmark_separation_cells - 1e-9;
    });
    if (!separated || std::find(landmark_cells.begin(), landmark_cells.end(), c) != landmark_cells.end()) {
      continue;
    }
    landmark_cells.push_back(c);
    const double rel = params.uniform_relevance ? 1.0 : relevance(rng);
    out.landmarks.push_back({static_cast<int>(out.landmarks.size()), ws.center(c), rel});
  }

  auto is_landmark = [&](const Cell& c) {
    return std::find(landmark_cells.begin(), landmark_cells.end(), c) != landmark_cells.end();
  };

  std::vector<double> weights;
  for (const Landmark& l : out.landmarks) weights.push_back(l.relevance);

  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    const Cell start = free_cells[pick(rng)];
    if (is_landmark(start)) continue;
    const Pose start_pose = ws.center(start);

    std::vector<Cell> candidates;
    int anchor = -1;
    if (params.target_mode == TargetMode::NearLandmark && m > 0) {
      std::discrete_distribution<int> choose(weights.begin(), weights.end());
      anchor = choose(rng);
      const Landmark& lm = out.landmarks[static_cast<std::size_t>(anchor)];
      const Cell lc = landmark_cells[static_cast<std::size_t>(anchor)];
      const int reach = static_cast<int>(std::ceil(params.target_spread_m / ws.resolution()));
      for (int dy = -reach; dy <= reach; ++dy) {
        for (int dx = -reach; dx <= reach; ++dx) {
          const Cell c{lc.x + dx, lc.y + dy};
          if (!ws.is_free(c)) continue;
          if (distance(ws.center(c), lm.pose) > params.target_spread_m + 1e-9) continue;
          if (!line_of_sight(ws, ws.center(c), lm.pose)) continue;
          candidates.push_back(c);
        }
      }
    } else {
      candidates.push_back(free_cells[pick(rng)]);
    }

    std::vector<Cell> valid;
    for (const Cell& c : candidates) {
      if (c == start) continue;
      if (!params.allow_target_on_landmark && is_landmark(c)) continue;
      if (distance(ws.center(c), start_pose) <= params.short_range_m) continue;
      valid.push_back(c);
    }
    if (valid.empty()) continue;
    std::uniform_int_distribution<std::size_t> which(0, valid.size() - 1);
    out.start = start_pose;
    out.target = ws.center(valid[which(rng)]);
    out.target_landmark = anchor;
    return out;
  }
  throw ConfigError("cannot place start and target under the given constraints");
}

}  // namespace moon
