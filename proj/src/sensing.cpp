#include "moon/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace moon {

void SensorConfig::validate() const {
  if (!(short_range_m > 0) || !(long_range_m > short_range_m)) {
    throw ConfigError("sensor ranges must satisfy long_range_m > short_range_m > 0");
  }
}

BeliefMap::BeliefMap(int cols, int rows, double resolution_m)
    : resolution_m_(resolution_m),
      known_(cols, rows, Knowledge::Unknown),
      passable_(cols, rows, 0) {}

BeliefMap BeliefMap::blank_for(const Workspace& ws) {
  return BeliefMap(ws.cols(), ws.rows(), ws.resolution());
}

bool BeliefMap::reveal(const Cell& c, Knowledge k) {
  if (k == Knowledge::Unknown || !in_bounds(c) || known_[c] != Knowledge::Unknown) return false;
  known_[c] = k;
  passable_[c] = k == Knowledge::Free ? 1 : 0;
  ++known_count_;
  return true;
}

bool BeliefMap::observe_landmark(const Landmark& lm, int step) {
  if (observed_.contains(lm.id)) return false;
  observed_.emplace(lm.id, ObservedLandmark{lm.id, lm.pose, lm.relevance, step});
  return true;
}

bool BeliefMap::mark_visited(int id) {
  if (!observed_.contains(id)) throw std::logic_error("cannot visit an unobserved landmark");
  return visited_.insert(id).second;
}

Cell BeliefMap::cell_of(const Pose& p) const {
  return {static_cast<int>(std::floor(p.x_m / resolution_m_)),
          static_cast<int>(std::floor(p.y_m / resolution_m_))};
}

Pose BeliefMap::center(const Cell& c) const {
  return {(c.x + 0.5) * resolution_m_, (c.y + 0.5) * resolution_m_};
}

bool cell_visible(const Workspace& ws, const Pose& from, const Cell& cell) {
  return traverse_segment(from, ws.center(cell), ws.resolution(), [&](const Cell& c) {
    if (c == cell || !ws.in_bounds(c)) return true;
    return ws.cells()[c] == CellKind::Free;
  });
}

ObservationEvent sense(const Workspace& ws, const EntityPlacement& placement, BeliefMap& belief,
                       const Pose& pose, const SensorConfig& cfg) {
  ObservationEvent event;
  const int step = belief.next_sense_index();
  const double res = ws.resolution();
  const Cell here = ws.cell_of(pose);
  const int reach = static_cast<int>(std::ceil(cfg.long_range_m / res)) + 1;
  const double range_sq = cfg.long_range_m * cfg.long_range_m;

  const int y0 = std::max(0, here.y - reach), y1 = std::min(ws.rows() - 1, here.y + reach);
  const int x0 = std::max(0, here.x - reach), x1 = std::min(ws.cols() - 1, here.x + reach);
  for (int y = y0; y <= y1; ++y) {
    const double cy = (y + 0.5) * res - pose.y_m;
    if (cy * cy > range_sq) continue;
    for (int x = x0; x <= x1; ++x) {
      const Cell c{x, y};
      if (belief.at(c) != Knowledge::Unknown) continue;
      const double cx = (x + 0.5) * res - pose.x_m;
      if (cx * cx + cy * cy > range_sq) continue;
      if (cfg.occlusion && !cell_visible(ws, pose, c)) continue;
      const Knowledge k = ws.cells()[c] == CellKind::Free ? Knowledge::Free : Knowledge::Wall;
      if (belief.reveal(c, k)) ++event.newly_revealed_cells;
    }
  }

  for (const Landmark& lm : placement.landmarks) {
    if (belief.is_observed(lm.id)) continue;
    if (distance(pose, lm.pose) > cfg.long_range_m) continue;
    if (cfg.occlusion && !line_of_sight(ws, pose, lm.pose)) continue;
    if (belief.observe_landmark(lm, step)) event.new_landmarks.push_back(lm.id);
  }

  if (distance(pose, placement.target) <= cfg.short_range_m &&
      (!cfg.occlusion || line_of_sight(ws, pose, placement.target))) {
    event.target_detected = true;
    belief.set_target_found(placement.target);
  }
  return event;
}

bool is_frontier_cell(const BeliefMap& belief, const Cell& c) {
  if (!belief.is_known_free(c)) return false;
  for (int k = 0; k < 4; ++k) {
    const Cell n{c.x + kNeighborDx[k], c.y + kNeighborDy[k]};
    if (belief.in_bounds(n) && belief.at(n) == Knowledge::Unknown) return true;
  }
  return false;
}

std::vector<FrontierCluster> frontier_clusters(const BeliefMap& belief) {
  const int cols = belief.cols(), rows = belief.rows();
  Grid<std::uint8_t> frontier(cols, rows, 0);
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x)
      if (is_frontier_cell(belief, {x, y})) frontier[Cell{x, y}] = 1;

  std::vector<FrontierCluster> clusters;
  Grid<std::uint8_t> seen(cols, rows, 0);
  // row-major scan, so each cluster is discovered at its lowest (y, x) cell
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      const Cell seed{x, y};
      if (!frontier[seed] || seen[seed]) continue;
      FrontierCluster cluster;
      std::queue<Cell> queue;
      queue.push(seed);
      seen[seed] = 1;
      while (!queue.empty()) {
        const Cell c = queue.front();
        queue.pop();
        cluster.cells.push_back(c);
        for (int k = 0; k < 8; ++k) {
          const Cell n{c.x + kNeighborDx[k], c.y + kNeighborDy[k]};
          if (!frontier.in_bounds(n) || !frontier[n] || seen[n]) continue;
          seen[n] = 1;
          queue.push(n);
        }
      }
      std::sort(cluster.cells.begin(), cluster.cells.end(), yx_less);
      double sx = 0, sy = 0;
      for (const Cell& c : cluster.cells) {
        const Pose p = belief.center(c);
        sx += p.x_m;
        sy += p.y_m;
      }
      cluster.size = cluster.cells.size();
      cluster.centroid = {sx / static_cast<double>(cluster.size), sy / static_cast<double>(cluster.size)};
      clusters.push_back(std::move(cluster));
    }
  }
  return clusters;
}

std::string dump_belief_grid(const BeliefMap& belief) {
  std::string out;
  for (int y = 0; y < belief.rows(); ++y) {
    for (int x = 0; x < belief.cols(); ++x) {
      switch (belief.at({x, y})) {
        case Knowledge::Unknown: out.push_back('?'); break;
        case Knowledge::Free: out.push_back('.'); break;
        case Knowledge::Wall: out.push_back('#'); break;
      }
    }
    out.push_back('\n');
  }
  return out;
}

std::string landmarks_csv(const BeliefMap& belief) {
  std::ostringstream out;
  out.precision(17);
  out << "id,x,y,relevance,observed_step\n";
  for (const auto& [id, lm] : belief.observed_landmarks()) {
    out << id << ',' << lm.pose.x_m << ',' << lm.pose.y_m << ',' << lm.relevance << ','
        << lm.observed_step << '\n';
  }
  return out.str();
}

}  // namespace moon
