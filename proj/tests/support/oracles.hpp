// Independent reference implementations used as test oracles. They share no
// code with the library beyond the instance data types.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "moon/sop_instance.hpp"

namespace oracle {

struct RandomInstanceSpec {
  int min_clusters = 2;  // including the start cluster
  int max_clusters = 8;
  int max_members = 2;
  double end_probability = 0.3;
  double missing_edge_probability = 0.05;
  double asymmetry = 0.0;  // relative noise added to each directed edge
  bool integer_rewards = false;
};

/// Points in a 100 x 100 square, Euclidean costs, clusters of 1..max_members
/// nodes sharing one reward. Node 0 is the start.
inline moon::SopInstance random_instance(std::mt19937_64& rng, const RandomInstanceSpec& spec = {}) {
  std::uniform_int_distribution<int> cluster_count(spec.min_clusters, spec.max_clusters);
  std::uniform_int_distribution<int> members(1, spec.max_members);
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> int_reward(1, 10);

  const int k = cluster_count(rng);
  moon::SopInstance inst;
  std::vector<std::pair<double, double>> pts;
  for (int c = 0; c < k; ++c) {
    const int m = c == 0 ? 1 : members(rng);
    const double reward = c == 0 ? 0.0 : (spec.integer_rewards ? int_reward(rng) : 0.5 + 9.5 * unit(rng));
    const double detection = c == 0 ? 0.0 : unit(rng);
    for (int i = 0; i < m; ++i) {
      inst.cluster_of.push_back(c);
      inst.rewards.push_back(reward);
      inst.detection.push_back(detection);
      pts.emplace_back(coord(rng), coord(rng));
    }
  }
  const std::size_t n = pts.size();
  inst.cost = moon::CostMatrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double d = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
      if (spec.asymmetry > 0) d *= 1.0 + spec.asymmetry * unit(rng);
      inst.cost(i, j) = d;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (unit(rng) < spec.missing_edge_probability) {
        inst.cost(i, j) = std::numeric_limits<double>::infinity();
        inst.cost(j, i) = std::numeric_limits<double>::infinity();
      }
    }
  }
  inst.start = 0;
  if (k >= 3 && unit(rng) < spec.end_probability) {
    // last node becomes a mandatory end in its own cluster
    inst.end = static_cast<int>(n - 1);
    const int c = inst.cluster_of[n - 1];
    bool alone = true;
    for (std::size_t i = 0; i + 1 < n; ++i) alone = alone && inst.cluster_of[i] != c;
    if (!alone) {
      inst.cluster_of[n - 1] = k;
    }
  }
  inst.budget = 40.0 + 260.0 * unit(rng);
  return inst;
}

struct Best {
  bool found = false;
  double reward = 0.0;
  double cost = 0.0;
  std::vector<int> path;
};

/// Visits every budget-feasible path from the start that repeats no cluster
/// (and ends at the end node, when one is required).
inline void for_each_path(const moon::SopInstance& inst,
                          const std::function<void(const std::vector<int>&, double cost)>& visit) {
  const std::size_t n = inst.size();
  const double limit = inst.budget + 1e-9 * std::max(1.0, inst.budget);
  std::vector<int> path{inst.start};
  std::vector<char> used(static_cast<std::size_t>(inst.num_clusters()), 0);
  used[static_cast<std::size_t>(inst.cluster_of[static_cast<std::size_t>(inst.start)])] = 1;
  if (inst.end) used[static_cast<std::size_t>(inst.cluster_of[static_cast<std::size_t>(*inst.end)])] = 1;

  std::function<void(double)> rec = [&](double cost) {
    const auto last = static_cast<std::size_t>(path.back());
    if (inst.end) {
      const double closing = cost + inst.cost(last, static_cast<std::size_t>(*inst.end));
      if (closing <= limit) {
        path.push_back(*inst.end);
        visit(path, closing);
        path.pop_back();
      }
    } else {
      visit(path, cost);
    }
    for (std::size_t v = 0; v < n; ++v) {
      const auto c = static_cast<std::size_t>(inst.cluster_of[v]);
      if (used[c]) continue;
      const double next = cost + inst.cost(last, v);
      if (!(next <= limit)) continue;
      used[c] = 1;
      path.push_back(static_cast<int>(v));
      rec(next);
      path.pop_back();
      used[c] = 0;
    }
  };
  rec(0.0);
}

inline double path_reward(const moon::SopInstance& inst, const std::vector<int>& path,
                          const std::vector<double>& score) {
  std::vector<char> seen(static_cast<std::size_t>(inst.num_clusters()), 0);
  double r = 0.0;
  for (int v : path) {
    const auto c = static_cast<std::size_t>(inst.cluster_of[static_cast<std::size_t>(v)]);
    if (!seen[c]) r += score[static_cast<std::size_t>(v)];
    seen[c] = 1;
  }
  return r;
}

/// Exhaustive maximum reward, ties broken by lower cost.
inline Best exhaustive_best(const moon::SopInstance& inst) {
  Best best;
  for_each_path(inst, [&](const std::vector<int>& path, double cost) {
    const double r = path_reward(inst, path, inst.rewards);
    if (!best.found || r > best.reward + 1e-9 || (std::abs(r - best.reward) <= 1e-9 && cost < best.cost - 1e-9)) {
      best = {true, r, cost, path};
    }
  });
  return best;
}

/// Exact minimum-cost open path from `start` over all nodes (every order).
inline double exhaustive_tsp(const moon::CostMatrix& cost, int start) {
  std::vector<int> rest;
  for (int i = 0; i < static_cast<int>(cost.size()); ++i)
    if (i != start) rest.push_back(i);
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    int prev = start;
    for (int v : rest) {
      c += cost(static_cast<std::size_t>(prev), static_cast<std::size_t>(v));
      prev = v;
    }
    best = std::min(best, c);
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best;
}

/// Objective vectors (maximize first, minimize second) of every feasible path,
/// reduced to the non-dominated set with tolerance `tol`.
inline std::vector<std::pair<double, double>> brute_force_front(const moon::SopInstance& inst,
                                                               const std::vector<double>& score,
                                                               double tol = 1e-9) {
  std::vector<std::pair<double, double>> all;
  for_each_path(inst, [&](const std::vector<int>& path, double cost) {
    all.emplace_back(path_reward(inst, path, score), cost);
  });
  std::vector<std::pair<double, double>> front;
  for (const auto& a : all) {
    bool dominated = false;
    for (const auto& b : all) {
      const bool no_worse = b.first >= a.first - tol && b.second <= a.second + tol;
      const bool better = b.first > a.first + tol || b.second < a.second - tol;
      if (no_worse && better) {
        dominated = true;
        break;
      }
    }
    if (dominated) continue;
    const bool dup = std::any_of(front.begin(), front.end(), [&](const auto& f) {
      return std::abs(f.first - a.first) <= tol && std::abs(f.second - a.second) <= tol;
    });
    if (!dup) front.push_back(a);
  }
  std::sort(front.begin(), front.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
  return front;
}

}  // namespace oracle
