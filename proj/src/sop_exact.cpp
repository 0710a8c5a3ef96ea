#include <algorithm>
#include <cmath>
#include <limits>

#include "moon/sop.hpp"

namespace moon {

namespace {

constexpr double kEps = 1e-9;
constexpr std::size_t kMaxMemoEntries = std::size_t{1} << 24;

double budget_slack(double budget) { return kEps * std::max(1.0, budget); }

/// Depth-first branch and bound over cluster sequences. Children are expanded
/// in ascending node order, so paths are enumerated lexicographically and the
/// first path reaching a given (reward, cost) is the lexicographically
/// smallest. A path reaching (visited clusters, last node) no cheaper than an
/// earlier one is pruned: it has the same completions, none better.
class ExactSearch {
 public:
  ExactSearch(const SopInstance& inst, const ExactOptions& options) : inst_(inst), options_(options) {
    const std::size_t n = inst.size();
    const int start_cluster = inst.cluster_of[static_cast<std::size_t>(inst.start)];
    const int end_cluster = inst.end ? inst.cluster_of[static_cast<std::size_t>(*inst.end)] : -1;
    bit_of_cluster_.assign(static_cast<std::size_t>(inst.num_clusters()), -1);
    for (std::size_t v = 0; v < n; ++v) {
      const int c = inst.cluster_of[v];
      if (c == start_cluster || c == end_cluster) continue;
      auto& bit = bit_of_cluster_[static_cast<std::size_t>(c)];
      if (bit < 0) {
        bit = static_cast<int>(members_.size());
        members_.emplace_back();
      }
      members_[static_cast<std::size_t>(bit)].push_back(static_cast<int>(v));
      eligible_.push_back(static_cast<int>(v));
    }
    if (members_.size() > options.cluster_limit) {
      throw SizeError("instance has " + std::to_string(members_.size()) + " clusters; exact limit is " +
                      std::to_string(options.cluster_limit) + " (use the VNS solver)");
    }
    const std::size_t memo_size = (std::size_t{1} << members_.size()) * n;
    if (memo_size > kMaxMemoEntries) throw SizeError("instance too large for exact search memo");
    memo_.assign(memo_size, std::numeric_limits<double>::infinity());
    slack_ = budget_slack(inst.budget);

    // shortest-path closure: lower bounds that stay valid without the triangle inequality
    lb_ = inst.cost;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) lb_(i, j) = std::min(lb_(i, j), lb_(i, k) + lb_(k, j));
    best_member_reward_.resize(members_.size());
    for (std::size_t k = 0; k < members_.size(); ++k) {
      double r = 0.0;
      for (int v : members_[k]) r = std::max(r, inst.rewards[static_cast<std::size_t>(v)]);
      best_member_reward_[k] = r;
    }
  }

  SopSolution run() {
    const auto s = static_cast<std::size_t>(inst_.start);
    path_.push_back(inst_.start);
    std::vector<double> floor_values;
    for (const auto& f : options_.floors) floor_values.push_back(f.per_node[s]);
    dfs(inst_.start, 0, 0.0, inst_.rewards[s], floor_values);
    if (!found_) return make_solution(inst_, {inst_.start});
    return make_solution(inst_, best_path_);
  }

 private:
  double c(int a, int b) const { return inst_.cost(static_cast<std::size_t>(a), static_cast<std::size_t>(b)); }
  double lb(int a, int b) const { return lb_(static_cast<std::size_t>(a), static_cast<std::size_t>(b)); }

  bool floors_met(const std::vector<double>& values) const {
    for (std::size_t f = 0; f < values.size(); ++f) {
      if (values[f] < options_.floors[f].minimum - kEps) return false;
    }
    return true;
  }

  void consider(double reward, double cost, bool with_end) {
    const bool better = !found_ || reward > best_reward_ + kEps ||
                        (std::abs(reward - best_reward_) <= kEps && cost < best_cost_ - kEps);
    if (!better) return;
    found_ = true;
    best_reward_ = reward;
    best_cost_ = cost;
    best_path_ = path_;
    if (with_end) best_path_.push_back(*inst_.end);
  }

  bool could_improve(double upper_reward, double cost) const {
    return !found_ || upper_reward > best_reward_ + kEps ||
           (upper_reward >= best_reward_ - kEps && cost < best_cost_ - kEps);
  }

  void dfs(int last, std::size_t mask, double cost, double reward, std::vector<double>& floor_values) {
    const bool has_end = inst_.end.has_value();
    const int t = has_end ? *inst_.end : -1;
    const double end_reward = has_end ? inst_.rewards[static_cast<std::size_t>(t)] : 0.0;

    // the current prefix as a finished path
    if (!has_end) {
      if (floors_met(floor_values)) consider(reward, cost, false);
    } else if (cost + c(last, t) <= inst_.budget + slack_) {
      std::vector<double> with_end = floor_values;
      for (std::size_t f = 0; f < with_end.size(); ++f) {
        with_end[f] += options_.floors[f].per_node[static_cast<std::size_t>(t)];
      }
      if (floors_met(with_end)) consider(reward + end_reward, cost + c(last, t), true);
    }

    // optimistic bound: every cluster still affordable from here
    const double remaining = inst_.budget + slack_ - cost;
    double upper = reward + end_reward;
    std::vector<double> floor_upper = floor_values;
    for (std::size_t f = 0; f < floor_upper.size(); ++f) {
      if (has_end) floor_upper[f] += options_.floors[f].per_node[static_cast<std::size_t>(t)];
    }
    for (std::size_t k = 0; k < members_.size(); ++k) {
      if (mask & (std::size_t{1} << k)) continue;
      bool affordable = false;
      for (int v : members_[k]) {
        const double need = lb(last, v) + (has_end ? lb(v, t) : 0.0);
        if (need <= remaining) {
          affordable = true;
          break;
        }
      }
      if (!affordable) continue;
      upper += best_member_reward_[k];
      for (std::size_t f = 0; f < floor_upper.size(); ++f) {
        double best = 0.0;
        for (int v : members_[k]) best = std::max(best, options_.floors[f].per_node[static_cast<std::size_t>(v)]);
        floor_upper[f] += best;
      }
    }
    for (std::size_t f = 0; f < floor_upper.size(); ++f) {
      if (floor_upper[f] < options_.floors[f].minimum - kEps) return;
    }
    if (!could_improve(upper, cost)) return;

    const std::size_t n = inst_.size();
    for (int v : eligible_) {
      const auto vi = static_cast<std::size_t>(v);
      const auto bit = static_cast<std::size_t>(bit_of_cluster_[static_cast<std::size_t>(inst_.cluster_of[vi])]);
      if (mask & (std::size_t{1} << bit)) continue;
      const double next_cost = cost + c(last, v);
      if (next_cost > inst_.budget + slack_) continue;
      if (has_end && next_cost + lb(v, t) > inst_.budget + slack_) continue;
      const std::size_t next_mask = mask | (std::size_t{1} << bit);
      double& memo = memo_[next_mask * n + vi];
      if (memo <= next_cost + kEps) continue;
      memo = next_cost;

      path_.push_back(v);
      for (std::size_t f = 0; f < floor_values.size(); ++f) floor_values[f] += options_.floors[f].per_node[vi];
      dfs(v, next_mask, next_cost, reward + inst_.rewards[vi], floor_values);
      for (std::size_t f = 0; f < floor_values.size(); ++f) floor_values[f] -= options_.floors[f].per_node[vi];
      path_.pop_back();
      if (!could_improve(upper, cost)) return;
    }
  }

  const SopInstance& inst_;
  const ExactOptions& options_;
  std::vector<int> bit_of_cluster_;
  std::vector<std::vector<int>> members_;
  std::vector<int> eligible_;
  std::vector<double> memo_;
  CostMatrix lb_;
  std::vector<double> best_member_reward_;
  double slack_ = 0.0;

  std::vector<int> path_;
  bool found_ = false;
  double best_reward_ = 0.0;
  double best_cost_ = 0.0;
  std::vector<int> best_path_;
};

}  // namespace

std::size_t decision_clusters(const SopInstance& inst) {
  const int start_cluster = inst.cluster_of[static_cast<std::size_t>(inst.start)];
  const int end_cluster = inst.end ? inst.cluster_of[static_cast<std::size_t>(*inst.end)] : -1;
  const int k = inst.num_clusters();
  return static_cast<std::size_t>(k - 1 - (end_cluster >= 0 && end_cluster != start_cluster ? 1 : 0));
}

SopSolution solve_exact(const SopInstance& inst, const ExactOptions& options) {
  inst.validate();
  for (const auto& f : options.floors) {
    if (f.per_node.size() != inst.size()) throw InstanceError("score floor has wrong length");
  }
  ExactSearch search(inst, options);
  return search.run();
}

}  // namespace moon
