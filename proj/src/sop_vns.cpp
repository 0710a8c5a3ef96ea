#include <algorithm>
#include <cmath>
#include <random>

#include "moon/rng.hpp"
#include "moon/sop.hpp"

namespace moon {

namespace {

constexpr double kEps = 1e-9;

/// Route = the nodes visited after the start (and before the end, if any).
class VnsSearch {
 public:
  explicit VnsSearch(const SopInstance& inst) : inst_(inst) {
    const int start_cluster = inst.cluster_of[static_cast<std::size_t>(inst.start)];
    const int end_cluster = inst.end ? inst.cluster_of[static_cast<std::size_t>(*inst.end)] : -1;
    members_ = inst.cluster_members();
    for (int c = 0; c < static_cast<int>(members_.size()); ++c) {
      if (c == start_cluster || c == end_cluster) continue;
      if (inst.rewards[static_cast<std::size_t>(members_[static_cast<std::size_t>(c)].front())] <= 0.0) continue;
      candidates_.push_back(c);
    }
    base_reward_ = inst.rewards[static_cast<std::size_t>(inst.start)] +
                   (inst.end ? inst.rewards[static_cast<std::size_t>(*inst.end)] : 0.0);
    limit_ = inst.budget + kEps * std::max(1.0, inst.budget);
  }

  struct Route {
    std::vector<int> nodes;
    double cost = 0.0;
    double reward = 0.0;
  };

  /// The bare start(-end) route. When the start-end edge is missing, the
  /// cheapest one- or two-node bridge stands in, so the route cost is finite
  /// whenever a short feasible route exists.
  Route empty_route() const {
    Route r;
    r.reward = base_reward_;
    r.cost = inst_.end ? c(inst_.start, *inst_.end) : 0.0;
    if (std::isfinite(r.cost)) return r;
    const int s = inst_.start, t = *inst_.end;
    const int n = static_cast<int>(inst_.size());
    auto free_cluster = [&](int v) {
      const int cl = inst_.cluster_of[static_cast<std::size_t>(v)];
      return cl != inst_.cluster_of[static_cast<std::size_t>(s)] && cl != inst_.cluster_of[static_cast<std::size_t>(t)];
    };
    Route best = r;
    auto offer = [&](std::vector<int> nodes) {
      Route cand;
      cand.nodes = std::move(nodes);
      recompute(cand);
      if (!std::isfinite(best.cost) || better(cand, best)) best = std::move(cand);
    };
    for (int u = 0; u < n; ++u) {
      if (!free_cluster(u)) continue;
      if (std::isfinite(c(s, u) + c(u, t))) offer({u});
    }
    if (std::isfinite(best.cost)) return best;
    for (int u = 0; u < n; ++u)
      for (int w = 0; w < n; ++w) {
        if (!free_cluster(u) || !free_cluster(w)) continue;
        if (inst_.cluster_of[static_cast<std::size_t>(u)] == inst_.cluster_of[static_cast<std::size_t>(w)]) continue;
        if (std::isfinite(c(s, u) + c(u, w) + c(w, t))) offer({u, w});
      }
    return best;
  }

  bool feasible(const Route& r) const { return r.cost <= limit_; }

  static bool better(const Route& a, const Route& b) {
    return a.reward > b.reward + kEps || (std::abs(a.reward - b.reward) <= kEps && a.cost < b.cost - kEps);
  }

  void recompute(Route& r) const {
    r.cost = 0.0;
    r.reward = base_reward_;
    int prev = inst_.start;
    for (int v : r.nodes) {
      r.cost += c(prev, v);
      r.reward += inst_.rewards[static_cast<std::size_t>(v)];
      prev = v;
    }
    if (inst_.end) r.cost += c(prev, *inst_.end);
  }

  /// Repeatedly inserts the (node, position) with the best reward per added
  /// cost until nothing affordable remains.
  bool insert_greedy(Route& r) const {
    bool changed = false;
    std::vector<char> used = used_clusters(r);
    for (;;) {
      int best_node = -1;
      std::size_t best_pos = 0;
      double best_added = 0.0, best_ratio = -1.0;
      for (int cl : candidates_) {
        if (used[static_cast<std::size_t>(cl)]) continue;
        const double reward = inst_.rewards[static_cast<std::size_t>(members_[static_cast<std::size_t>(cl)].front())];
        for (int u : members_[static_cast<std::size_t>(cl)]) {
          for (std::size_t pos = 0; pos <= r.nodes.size(); ++pos) {
            const double added = insertion_delta(r, u, pos);
            if (!(r.cost + added <= limit_)) continue;
            const double ratio = reward / std::max(added, 1e-9);
            if (ratio > best_ratio * (1 + 1e-12) ||
                (std::abs(ratio - best_ratio) <= 1e-12 * best_ratio && added < best_added - kEps)) {
              best_ratio = ratio;
              best_added = added;
              best_node = u;
              best_pos = pos;
            }
          }
        }
      }
      if (best_node < 0) return changed;
      r.nodes.insert(r.nodes.begin() + static_cast<std::ptrdiff_t>(best_pos), best_node);
      r.cost += best_added;
      r.reward += inst_.rewards[static_cast<std::size_t>(best_node)];
      used[static_cast<std::size_t>(inst_.cluster_of[static_cast<std::size_t>(best_node)])] = 1;
      changed = true;
    }
  }

  /// Variable neighborhood descent: restart from the first neighborhood after
  /// every improving move.
  void local_search(Route& r) const {
    for (;;) {
      if (reselect_nodes(r)) continue;
      if (two_opt(r)) continue;
      if (relocate(r)) continue;
      if (insert_greedy(r)) continue;
      if (exchange(r)) continue;
      break;
    }
  }

  /// Drops k random visits, then inserts up to k random unvisited cluster
  /// members at random positions where the budget allows.
  void shake(Route& r, int k, std::mt19937_64& rng) const {
    for (int i = 0; i < k && !r.nodes.empty(); ++i) {
      std::uniform_int_distribution<std::size_t> pick(0, r.nodes.size() - 1);
      r.nodes.erase(r.nodes.begin() + static_cast<std::ptrdiff_t>(pick(rng)));
    }
    recompute(r);
    if (!std::isfinite(r.cost)) return;
    std::vector<char> used = used_clusters(r);
    for (int i = 0; i < k; ++i) {
      std::vector<int> open;
      for (int cl : candidates_)
        if (!used[static_cast<std::size_t>(cl)]) open.push_back(cl);
      if (open.empty()) break;
      const int cl = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
      const auto& group = members_[static_cast<std::size_t>(cl)];
      const int u = group[std::uniform_int_distribution<std::size_t>(0, group.size() - 1)(rng)];
      const std::size_t pos = std::uniform_int_distribution<std::size_t>(0, r.nodes.size())(rng);
      const double added = insertion_delta(r, u, pos);
      if (!(r.cost + added <= limit_)) continue;
      r.nodes.insert(r.nodes.begin() + static_cast<std::ptrdiff_t>(pos), u);
      used[static_cast<std::size_t>(cl)] = 1;
      recompute(r);
    }
  }

  /// Infeasible routes (no start-end connection within budget) collapse to the
  /// bare start, matching the exact solver.
  SopSolution to_solution(const Route& r) const {
    if (!feasible(r)) return make_solution(inst_, {inst_.start});
    std::vector<int> path{inst_.start};
    path.insert(path.end(), r.nodes.begin(), r.nodes.end());
    if (inst_.end) path.push_back(*inst_.end);
    return make_solution(inst_, std::move(path));
  }

 private:
  double c(int a, int b) const { return inst_.cost(static_cast<std::size_t>(a), static_cast<std::size_t>(b)); }

  std::vector<char> used_clusters(const Route& r) const {
    std::vector<char> used(members_.size(), 0);
    for (int v : r.nodes) used[static_cast<std::size_t>(inst_.cluster_of[static_cast<std::size_t>(v)])] = 1;
    return used;
  }

  int before(const Route& r, std::size_t pos) const { return pos == 0 ? inst_.start : r.nodes[pos - 1]; }
  /// Node following position `pos`, or -1 at an open end.
  int after(const Route& r, std::size_t pos) const {
    if (pos + 1 < r.nodes.size()) return r.nodes[pos + 1];
    return inst_.end ? *inst_.end : -1;
  }

  double insertion_delta(const Route& r, int u, std::size_t pos) const {
    const int prev = before(r, pos);
    const int next = pos < r.nodes.size() ? r.nodes[pos] : (inst_.end ? *inst_.end : -1);
    double d = c(prev, u);
    if (next >= 0) d += c(u, next) - c(prev, next);
    return d;
  }

  double replace_delta(const Route& r, std::size_t pos, int u) const {
    const int prev = before(r, pos);
    const int next = after(r, pos);
    const int x = r.nodes[pos];
    double d = c(prev, u) - c(prev, x);
    if (next >= 0) d += c(u, next) - c(x, next);
    return d;
  }

  bool reselect_nodes(Route& r) const {
    bool improved = false;
    for (std::size_t pos = 0; pos < r.nodes.size(); ++pos) {
      const int x = r.nodes[pos];
      for (int u : members_[static_cast<std::size_t>(inst_.cluster_of[static_cast<std::size_t>(x)])]) {
        if (u == r.nodes[pos]) continue;
        const double d = replace_delta(r, pos, u);
        if (d < -kEps) {
          r.nodes[pos] = u;
          r.cost += d;
          improved = true;
        }
      }
    }
    return improved;
  }

  bool two_opt(Route& r) const {
    const std::size_t len = r.nodes.size();
    for (std::size_t i = 0; i + 1 < len; ++i) {
      const int prev = before(r, i);
      double internal = 0.0;  // cost change of the reversed interior edges
      for (std::size_t j = i + 1; j < len; ++j) {
        internal += c(r.nodes[j], r.nodes[j - 1]) - c(r.nodes[j - 1], r.nodes[j]);
        const int a = r.nodes[i], b = r.nodes[j];
        const int next = after(r, j);
        double d = c(prev, b) - c(prev, a) + internal;
        if (next >= 0) d += c(a, next) - c(b, next);
        if (d < -kEps) {
          std::reverse(r.nodes.begin() + static_cast<std::ptrdiff_t>(i),
                       r.nodes.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          r.cost += d;
          return true;
        }
      }
    }
    return false;
  }

  bool relocate(Route& r) const {
    const std::size_t len = r.nodes.size();
    for (std::size_t i = 0; i < len; ++i) {
      const int x = r.nodes[i];
      const int prev = before(r, i);
      const int next = after(r, i);
      double removal = -c(prev, x);
      if (next >= 0) removal += c(prev, next) - c(x, next);
      Route reduced = r;
      reduced.nodes.erase(reduced.nodes.begin() + static_cast<std::ptrdiff_t>(i));
      reduced.cost += removal;
      for (std::size_t pos = 0; pos <= reduced.nodes.size(); ++pos) {
        if (pos == i) continue;
        const double d = removal + insertion_delta(reduced, x, pos);
        if (d < -kEps) {
          reduced.nodes.insert(reduced.nodes.begin() + static_cast<std::ptrdiff_t>(pos), x);
          reduced.cost = r.cost + d;
          r = std::move(reduced);
          return true;
        }
      }
    }
    return false;
  }

  /// Swap a visited cluster for an unvisited one when that raises the reward
  /// (or keeps it and lowers the cost) within budget.
  bool exchange(Route& r) const {
    std::vector<char> used = used_clusters(r);
    for (std::size_t pos = 0; pos < r.nodes.size(); ++pos) {
      const double old_reward = inst_.rewards[static_cast<std::size_t>(r.nodes[pos])];
      for (int cl : candidates_) {
        if (used[static_cast<std::size_t>(cl)]) continue;
        for (int u : members_[static_cast<std::size_t>(cl)]) {
          const double gain = inst_.rewards[static_cast<std::size_t>(u)] - old_reward;
          const double d = replace_delta(r, pos, u);
          if (!(r.cost + d <= limit_)) continue;
          if (gain > kEps || (gain >= -kEps && d < -kEps)) {
            r.nodes[pos] = u;
            r.cost += d;
            r.reward += gain;
            return true;
          }
        }
      }
    }
    return false;
  }

  const SopInstance& inst_;
  std::vector<std::vector<int>> members_;
  std::vector<int> candidates_;
  double base_reward_ = 0.0;
  double limit_ = 0.0;
};

}  // namespace

SopSolution solve_greedy(const SopInstance& inst) {
  inst.validate();
  VnsSearch search(inst);
  auto route = search.empty_route();
  search.insert_greedy(route);
  search.recompute(route);
  return search.to_solution(route);
}

SopSolution solve_vns(const SopInstance& inst, std::uint64_t seed, std::size_t iterations) {
  inst.validate();
  if (iterations == 0) throw std::invalid_argument("VNS needs at least one iteration");
  VnsSearch search(inst);
  std::mt19937_64 rng(derive_seed(seed, StreamTag::Solver));

  auto best = search.empty_route();
  search.insert_greedy(best);
  search.local_search(best);
  search.recompute(best);  // drop accumulated rounding from delta updates

  const int max_shake = 3;
  int k = 1;
  for (std::size_t it = 0; it < iterations; ++it) {
    auto candidate = best;
    search.shake(candidate, k, rng);
    search.local_search(candidate);
    search.recompute(candidate);
    if (search.feasible(candidate) && VnsSearch::better(candidate, best)) {
      best = std::move(candidate);
      k = 1;
    } else {
      k = k % max_shake + 1;
    }
  }
  return search.to_solution(best);
}

}  // namespace moon
