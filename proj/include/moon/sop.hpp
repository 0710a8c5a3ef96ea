#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "moon/sop_instance.hpp"

namespace moon {

/// A path through the instance, starting at its start node. Consecutive pairs
/// are the chosen edges; the order encodes the visiting sequence.
struct SopSolution {
  std::vector<int> path;
  double total_reward = 0.0;
  double total_cost = 0.0;

  friend bool operator==(const SopSolution&, const SopSolution&) = default;
};

/// Builds a solution for `path`, computing reward (one per distinct cluster)
/// and cost from the instance.
SopSolution make_solution(const SopInstance& inst, std::vector<int> path);

enum class ViolationKind {
  EmptyPath,
  NodeOutOfRange,
  WrongStart,
  WrongEnd,
  DegreeMismatch,
  BudgetExceeded,
  RepeatedCluster,
  RepeatedNode,  // subtour
  MissingEdge,
  RewardMismatch,
  CostMismatch,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
};

/// Checks start/end, in/out-degree consistency, budget, cluster and node
/// uniqueness, and the solution's reward/cost arithmetic. Never throws.
ValidationReport validate(const SopInstance& inst, const SopSolution& sol);

/// Raised when an instance is too large for the exact solver.
class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lower bound on a secondary additive score (one value per cluster, taken
/// from any member node), used by the epsilon-constraint method.
struct ScoreFloor {
  std::vector<double> per_node;
  double minimum = 0.0;
};

struct ExactOptions {
  std::size_t cluster_limit = 12;
  std::vector<ScoreFloor> floors;
};

/// Number of clusters the exact solver has to decide on (all but the start's
/// and the end's).
std::size_t decision_clusters(const SopInstance& inst);

/// Maximum reward; ties broken by lower cost, then lexicographically smallest
/// path. Returns [start] (plus end, if required and affordable) when no path
/// satisfies the floors. Throws SizeError above the cluster limit.
SopSolution solve_exact(const SopInstance& inst, const ExactOptions& options = {});

/// Greedy construction by best reward per added cost.
SopSolution solve_greedy(const SopInstance& inst);

struct VnsOptions {
  std::size_t iterations = 300;
  int max_shake = 3;
};

inline constexpr std::size_t kDefaultVnsIterations = 300;

/// Variable neighborhood search seeded from the greedy construction.
/// Deterministic for fixed (instance, seed, iterations).
SopSolution solve_vns(const SopInstance& inst, std::uint64_t seed,
                      std::size_t iterations = kDefaultVnsIterations);

/// "reward cost id id ..." on one line.
void write_solution(std::ostream& out, const SopSolution& sol);

}  // namespace moon
