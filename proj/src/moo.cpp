#include "moon/moo.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

namespace moon {

namespace {

constexpr double kSameValue = 1e-9;

bool same_vector(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.values.size() != b.values.size()) return false;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (std::abs(a.values[i] - b.values[i]) > kSameValue * std::max(1.0, std::abs(a.values[i]))) return false;
  }
  return true;
}

std::vector<Sense> senses_of(const std::vector<Objective>& objectives) {
  std::vector<Sense> senses;
  for (Objective o : objectives) senses.push_back(sense_of(o));
  return senses;
}

double detection_total(const SopInstance& inst) {
  double total = 0.0;
  for (const auto& m : inst.cluster_members()) total += inst.detection[static_cast<std::size_t>(m.front())];
  return total;
}

}  // namespace

Sense sense_of(Objective objective) { return objective == Objective::Cost ? Sense::Min : Sense::Max; }

const char* to_string(Objective objective) {
  switch (objective) {
    case Objective::Reward: return "reward";
    case Objective::Cost: return "cost";
    case Objective::Detection: return "detection";
  }
  return "unknown";
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b, const std::vector<Sense>& senses) {
  if (a.values.size() != b.values.size() || a.values.size() != senses.size()) {
    throw std::invalid_argument("objective vectors and senses must have equal arity");
  }
  bool strictly_better = false;
  for (std::size_t i = 0; i < senses.size(); ++i) {
    const double x = senses[i] == Sense::Max ? a.values[i] : -a.values[i];
    const double y = senses[i] == Sense::Max ? b.values[i] : -b.values[i];
    if (x < y) return false;
    if (x > y) strictly_better = true;
  }
  return strictly_better;
}

ObjectiveVector evaluate(const SopInstance& inst, const SopSolution& sol,
                         const std::vector<Objective>& objectives) {
  const SopSolution scored = make_solution(inst, sol.path);
  double detection = 0.0;
  std::set<int> seen;
  for (int v : sol.path) {
    const auto vi = static_cast<std::size_t>(v);
    if (seen.insert(inst.cluster_of[vi]).second) detection += inst.detection[vi];
  }
  ObjectiveVector out;
  for (Objective o : objectives) {
    switch (o) {
      case Objective::Reward: out.values.push_back(scored.total_reward); break;
      case Objective::Cost: out.values.push_back(scored.total_cost); break;
      case Objective::Detection: out.values.push_back(detection); break;
    }
  }
  return out;
}

SopInstance scalarize(const SopInstance& inst, const ScalarWeights& weights) {
  if (weights.reward < 0 || weights.cost < 0 || weights.detection < 0) {
    throw std::invalid_argument("scalarization weights must be non-negative");
  }
  if (weights.reward == 0 && weights.cost == 0 && weights.detection == 0) {
    throw std::invalid_argument("scalarization weights must not all be zero");
  }
  SopInstance out = inst;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.rewards[i] = weights.reward * inst.rewards[i] + weights.detection * inst.detection[i];
  }
  return out;
}

SopSolution epsilon_constraint(const SopInstance& inst, Objective primary, const EpsilonBounds& bounds,
                               std::size_t cluster_limit) {
  if (primary == Objective::Cost) throw std::invalid_argument("cost is minimized through its bound, not as primary");
  inst.validate();
  if (bounds.max_cost && *bounds.max_cost < 0) return make_solution(inst, {inst.start});

  SopInstance work = inst;
  if (bounds.max_cost) work.budget = std::min(inst.budget, *bounds.max_cost);
  ExactOptions options;
  options.cluster_limit = cluster_limit;
  if (primary == Objective::Detection) {
    work.rewards = inst.detection;
    if (bounds.min_reward) options.floors.push_back({inst.rewards, *bounds.min_reward});
  } else if (bounds.min_detection) {
    options.floors.push_back({inst.detection, *bounds.min_detection});
  }
  SopSolution sol = solve_exact(work, options);
  return make_solution(inst, sol.path);
}

std::vector<ParetoPoint> non_dominated(std::vector<ParetoPoint> points, const std::vector<Sense>& senses) {
  std::vector<ParetoPoint> kept;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < points.size() && !drop; ++j) {
      if (i == j) continue;
      if (dominates(points[j].objectives, points[i].objectives, senses)) drop = true;
    }
    if (drop) continue;
    const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const ParetoPoint& k) {
      return same_vector(k.objectives, points[i].objectives);
    });
    if (!duplicate) kept.push_back(points[i]);
  }
  return kept;
}

ParetoFront pareto_enumerate(const SopInstance& inst, const std::vector<Objective>& objectives,
                             const EpsilonGrid& grid, std::size_t cluster_limit) {
  inst.validate();
  if (decision_clusters(inst) > cluster_limit) {
    throw SizeError("pareto enumeration needs an exact-solvable instance");
  }
  const std::set<Objective> set(objectives.begin(), objectives.end());
  if (set.size() != objectives.size() || objectives.empty()) {
    throw std::invalid_argument("objectives must be distinct and non-empty");
  }
  const bool has_cost = set.contains(Objective::Cost);
  const bool has_reward = set.contains(Objective::Reward);
  const bool has_detection = set.contains(Objective::Detection);
  if (has_cost && set.size() == 1) throw std::invalid_argument("cost alone has the trivial optimum [start]");

  ParetoFront front;
  front.objectives = objectives;
  std::vector<ParetoPoint> found;
  // bounds tighter than any feasible path yield an invalid bare start; those are not front members
  auto add = [&](const SopSolution& sol) {
    if (!validate(inst, sol).ok()) return false;
    found.push_back({evaluate(inst, sol, objectives), sol});
    return true;
  };
  const std::size_t points = std::max<std::size_t>(grid.points, 1);
  auto uniform = [&](double hi, std::size_t i) {
    return points == 1 ? hi : hi * static_cast<double>(i) / static_cast<double>(points - 1);
  };

  if (!has_cost) {
    if (set.size() == 1) {
      add(epsilon_constraint(inst, objectives.front(), {}, cluster_limit));
    } else {
      // reward vs detection under the full budget
      const double top = detection_total(inst);
      for (std::size_t i = 0; i < points; ++i) {
        add(epsilon_constraint(inst, Objective::Reward, {std::nullopt, std::nullopt, uniform(top, i)},
                               cluster_limit));
      }
    }
  } else if (set.size() == 2) {
    const Objective primary = has_reward ? Objective::Reward : Objective::Detection;
    if (grid.kind == EpsilonGrid::Kind::Adaptive) {
      double bound = inst.budget;
      for (;;) {
        const SopSolution sol = epsilon_constraint(inst, primary, {bound, std::nullopt, std::nullopt}, cluster_limit);
        if (!add(sol) || sol.path.size() <= 1 || sol.total_cost <= 0.0) break;
        bound = sol.total_cost - grid.step;
        if (bound < 0) break;
      }
    } else {
      for (std::size_t i = 0; i < points; ++i) {
        add(epsilon_constraint(inst, primary, {uniform(inst.budget, i), std::nullopt, std::nullopt},
                               cluster_limit));
      }
    }
  } else {
    if (grid.kind == EpsilonGrid::Kind::Adaptive) {
      throw std::invalid_argument("three-objective enumeration supports the uniform grid only");
    }
    (void)has_detection;
    const double top = detection_total(inst);
    for (std::size_t i = 0; i < points; ++i) {
      for (std::size_t j = 0; j < points; ++j) {
        add(epsilon_constraint(inst, Objective::Reward, {uniform(inst.budget, i), std::nullopt, uniform(top, j)},
                               cluster_limit));
      }
    }
  }

  front.points = non_dominated(std::move(found), senses_of(objectives));
  const auto cost_it = std::find(objectives.begin(), objectives.end(), Objective::Cost);
  const std::size_t key = cost_it != objectives.end() ? static_cast<std::size_t>(cost_it - objectives.begin()) : 0;
  const bool ascending = cost_it != objectives.end();
  std::sort(front.points.begin(), front.points.end(), [&](const ParetoPoint& a, const ParetoPoint& b) {
    const double x = a.objectives.values[key], y = b.objectives.values[key];
    if (x != y) return ascending ? x < y : x > y;
    return a.solution.path < b.solution.path;
  });
  return front;
}

void write_front_csv(std::ostream& out, const ParetoFront& front) {
  const auto old = out.precision(17);
  for (Objective o : front.objectives) out << to_string(o) << ',';
  out << "path\n";
  for (const ParetoPoint& p : front.points) {
    for (double v : p.objectives.values) out << v << ',';
    for (std::size_t i = 0; i < p.solution.path.size(); ++i) {
      if (i) out << ' ';
      out << p.solution.path[i];
    }
    out << '\n';
  }
  out.precision(old);
}

}  // namespace moon
