#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "moon/grid.hpp"
#include "moon/grid_path.hpp"
#include "moon/world.hpp"

namespace moon {

struct SensorConfig {
  double long_range_m = 100.0;  // landmark detector, also reveals occupancy
  double short_range_m = 3.0;   // target detector
  bool occlusion = true;        // walls block both detectors

  /// Throws ConfigError unless long_range_m > short_range_m > 0.
  void validate() const;
};

enum class Knowledge : std::uint8_t { Unknown, Free, Wall };

struct ObservedLandmark {
  int id = 0;
  Pose pose;
  double relevance = 1.0;
  int observed_step = 0;
};

/// Incrementally observed occupancy grid plus the landmark relevance map.
/// Knowledge is monotone: cells only leave Unknown, landmarks are only added.
class BeliefMap {
 public:
  BeliefMap() = default;
  BeliefMap(int cols, int rows, double resolution_m);
  static BeliefMap blank_for(const Workspace& ws);

  int cols() const { return known_.cols(); }
  int rows() const { return known_.rows(); }
  double resolution() const { return resolution_m_; }
  bool in_bounds(const Cell& c) const { return known_.in_bounds(c); }

  Knowledge at(const Cell& c) const { return known_[c]; }
  bool is_known_free(const Cell& c) const { return in_bounds(c) && known_[c] == Knowledge::Free; }
  /// Returns true when the cell was Unknown and is now revealed.
  bool reveal(const Cell& c, Knowledge k);
  std::size_t known_count() const { return known_count_; }

  /// Known-Free cells; the planning graph for every planner.
  const PassableGrid& passable() const { return passable_; }

  const std::map<int, ObservedLandmark>& observed_landmarks() const { return observed_; }
  const std::set<int>& visited_landmarks() const { return visited_; }
  bool is_observed(int id) const { return observed_.contains(id); }
  bool is_visited(int id) const { return visited_.contains(id); }
  /// No-op (returns false) when the landmark is already observed.
  bool observe_landmark(const Landmark& lm, int step);
  /// Throws std::logic_error for landmarks that were never observed.
  bool mark_visited(int id);

  const std::optional<Pose>& target_found() const { return target_found_; }
  void set_target_found(const Pose& p) {
    if (!target_found_) target_found_ = p;
  }

  int sense_count() const { return sense_count_; }
  int next_sense_index() { return sense_count_++; }

  Cell cell_of(const Pose& p) const;
  Pose center(const Cell& c) const;

 private:
  double resolution_m_ = 1.0;
  Grid<Knowledge> known_;
  PassableGrid passable_;
  std::size_t known_count_ = 0;
  std::map<int, ObservedLandmark> observed_;
  std::set<int> visited_;
  std::optional<Pose> target_found_;
  int sense_count_ = 0;
};

struct ObservationEvent {
  std::size_t newly_revealed_cells = 0;
  std::vector<int> new_landmarks;
  bool target_detected = false;
};

/// One observation from `pose`: reveals cells within the long range, records
/// landmarks within the long range and reports whether the target is within
/// the short range. With occlusion on, everything requires line of sight.
ObservationEvent sense(const Workspace& ws, const EntityPlacement& placement, BeliefMap& belief,
                       const Pose& pose, const SensorConfig& cfg);

/// True when `cell` is visible from `from`: no Wall cell on the segment to the
/// cell center other than the cell itself.
bool cell_visible(const Workspace& ws, const Pose& from, const Cell& cell);

struct FrontierCluster {
  Pose centroid;
  std::size_t size = 0;
  std::vector<Cell> cells;  // sorted by (y, x)
};

/// 8-connected components of known-Free cells that are 4-adjacent to an
/// Unknown cell, ordered by their lowest (y, x) cell.
std::vector<FrontierCluster> frontier_clusters(const BeliefMap& belief);

bool is_frontier_cell(const BeliefMap& belief, const Cell& c);

/// Plain-text grid: '?' Unknown, '.' Free, '#' Wall.
std::string dump_belief_grid(const BeliefMap& belief);
/// CSV with header id,x,y,relevance,observed_step.
std::string landmarks_csv(const BeliefMap& belief);

}  // namespace moon
