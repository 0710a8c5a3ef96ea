#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "moon/sop.hpp"
#include "moon/sop_instance.hpp"

namespace moon {

enum class Sense { Max, Min };

/// Objectives a SOP path can be scored on. Reward and Detection are
/// maximized, Cost is minimized.
enum class Objective { Reward, Cost, Detection };

Sense sense_of(Objective objective);
const char* to_string(Objective objective);

struct ObjectiveVector {
  std::vector<double> values;

  friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

/// a is no worse than b in every component and strictly better in one.
/// Throws std::invalid_argument on arity mismatch.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b, const std::vector<Sense>& senses);

/// Scores `sol` on `objectives`, in that order.
ObjectiveVector evaluate(const SopInstance& inst, const SopSolution& sol,
                         const std::vector<Objective>& objectives);

struct ParetoPoint {
  ObjectiveVector objectives;
  SopSolution solution;
};

struct ParetoFront {
  std::vector<Objective> objectives;
  std::vector<ParetoPoint> points;  // sorted by ascending cost when cost is an objective
};

struct ScalarWeights {
  double reward = 1.0;
  double cost = 0.0;  // cost stays a budget constraint; the weight is accepted but not folded in
  double detection = 0.0;
};

/// Node rewards become reward * p_i + detection * d_i. Throws
/// std::invalid_argument for negative or all-zero weights.
SopInstance scalarize(const SopInstance& inst, const ScalarWeights& weights);

struct EpsilonBounds {
  std::optional<double> max_cost;
  std::optional<double> min_reward;
  std::optional<double> min_detection;
};

/// Maximizes `primary` (Reward or Detection) subject to the bounds; returns
/// the bare start path when no solution meets them. Exact; the instance must
/// be within the exact cluster limit.
SopSolution epsilon_constraint(const SopInstance& inst, Objective primary, const EpsilonBounds& bounds,
                               std::size_t cluster_limit = 12);

struct EpsilonGrid {
  enum class Kind {
    Uniform,   // `points` evenly spaced bounds in [0, budget] (and over the detection range)
    Adaptive,  // tighten the cost bound just below each optimum until only the start remains
  };
  Kind kind = Kind::Uniform;
  std::size_t points = 10;
  double step = 1e-6;  // adaptive tightening below the previous optimum's cost
};

/// Enumerates non-dominated solutions by iterating epsilon_constraint over
/// the grid. Supported objective sets: {Reward}, {Detection}, {Reward, Cost},
/// {Detection, Cost}, {Reward, Detection, Cost} (uniform grid only).
ParetoFront pareto_enumerate(const SopInstance& inst, const std::vector<Objective>& objectives,
                             const EpsilonGrid& grid = {}, std::size_t cluster_limit = 12);

/// Removes dominated and duplicate points.
std::vector<ParetoPoint> non_dominated(std::vector<ParetoPoint> points, const std::vector<Sense>& senses);

/// CSV: one column per objective, then the space-separated path.
void write_front_csv(std::ostream& out, const ParetoFront& front);

}  // namespace moon
