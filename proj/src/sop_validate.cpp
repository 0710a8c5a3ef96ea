#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "moon/sop.hpp"

namespace moon {

namespace {

constexpr double kArithmeticTol = 1e-9;

bool close(double a, double b) {
  return std::abs(a - b) <= kArithmeticTol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

SopSolution make_solution(const SopInstance& inst, std::vector<int> path) {
  SopSolution sol;
  std::set<int> clusters;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto v = static_cast<std::size_t>(path[i]);
    if (clusters.insert(inst.cluster_of[v]).second) sol.total_reward += inst.rewards[v];
    if (i > 0) sol.total_cost += inst.cost(static_cast<std::size_t>(path[i - 1]), v);
  }
  sol.path = std::move(path);
  return sol;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::EmptyPath: return "empty-path";
    case ViolationKind::NodeOutOfRange: return "node-out-of-range";
    case ViolationKind::WrongStart: return "wrong-start";
    case ViolationKind::WrongEnd: return "wrong-end";
    case ViolationKind::DegreeMismatch: return "degree-mismatch";
    case ViolationKind::BudgetExceeded: return "budget-exceeded";
    case ViolationKind::RepeatedCluster: return "repeated-cluster";
    case ViolationKind::RepeatedNode: return "subtour";
    case ViolationKind::MissingEdge: return "missing-edge";
    case ViolationKind::RewardMismatch: return "reward-mismatch";
    case ViolationKind::CostMismatch: return "cost-mismatch";
  }
  return "unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

ValidationReport validate(const SopInstance& inst, const SopSolution& sol) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::string detail) {
    report.violations.push_back({kind, std::move(detail)});
  };
  const auto& path = sol.path;
  if (path.empty()) {
    add(ViolationKind::EmptyPath, "path has no nodes");
    return report;
  }
  const int n = static_cast<int>(inst.size());
  for (int v : path) {
    if (v < 0 || v >= n) {
      add(ViolationKind::NodeOutOfRange, "node " + std::to_string(v));
      return report;
    }
  }
  if (path.front() != inst.start) {
    add(ViolationKind::WrongStart, "path starts at " + std::to_string(path.front()));
  }
  if (inst.end && path.back() != *inst.end) {
    add(ViolationKind::WrongEnd, "path ends at " + std::to_string(path.back()));
  }

  // Degree consistency over the edge set x_ij given by consecutive pairs:
  // every node other than the start has in-degree 1, every node other than
  // the last has out-degree 1.
  std::map<int, int> in_deg, out_deg;
  for (std::size_t i = 1; i < path.size(); ++i) {
    ++out_deg[path[i - 1]];
    ++in_deg[path[i]];
  }
  const std::set<int> distinct(path.begin(), path.end());
  for (int v : distinct) {
    const int expected_in = v == path.front() ? 0 : 1;
    const int expected_out = v == path.back() ? 0 : 1;
    if (in_deg[v] != expected_in || out_deg[v] != expected_out) {
      std::ostringstream msg;
      msg << "node " << v << " in=" << in_deg[v] << " out=" << out_deg[v];
      add(ViolationKind::DegreeMismatch, msg.str());
    }
  }

  if (distinct.size() != path.size()) {
    add(ViolationKind::RepeatedNode, "a node appears more than once");
  }
  std::map<int, int> cluster_hits;
  for (int v : path) ++cluster_hits[inst.cluster_of[static_cast<std::size_t>(v)]];
  for (const auto& [cluster, hits] : cluster_hits) {
    if (hits > 1) add(ViolationKind::RepeatedCluster, "cluster " + std::to_string(cluster));
  }

  const SopSolution recomputed = make_solution(inst, path);
  if (!std::isfinite(recomputed.total_cost)) {
    add(ViolationKind::MissingEdge, "path uses an edge with infinite cost");
  }
  if (recomputed.total_cost > inst.budget + kArithmeticTol * std::max(1.0, inst.budget)) {
    std::ostringstream msg;
    msg << "cost " << recomputed.total_cost << " > budget " << inst.budget;
    add(ViolationKind::BudgetExceeded, msg.str());
  }
  if (!close(recomputed.total_reward, sol.total_reward)) {
    std::ostringstream msg;
    msg << "claimed reward " << sol.total_reward << ", recomputed " << recomputed.total_reward;
    add(ViolationKind::RewardMismatch, msg.str());
  }
  if (!(std::isinf(recomputed.total_cost) && std::isinf(sol.total_cost)) &&
      !close(recomputed.total_cost, sol.total_cost)) {
    std::ostringstream msg;
    msg << "claimed cost " << sol.total_cost << ", recomputed " << recomputed.total_cost;
    add(ViolationKind::CostMismatch, msg.str());
  }
  return report;
}

void write_solution(std::ostream& out, const SopSolution& sol) {
  const auto old = out.precision(17);
  out << sol.total_reward << ' ' << sol.total_cost;
  for (int v : sol.path) out << ' ' << v;
  out << '\n';
  out.precision(old);
}

}  // namespace moon
