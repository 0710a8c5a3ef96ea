#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace moon {

/// Dense row-major n x n matrix of travel costs in meters.
class CostMatrix {
 public:
  CostMatrix() = default;
  explicit CostMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  friend bool operator==(const CostMatrix&, const CostMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Malformed instance data or file content.
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Set orienteering problem: pick a path from `start` (optionally ending at
/// `end`) of total cost <= budget that collects each cluster's reward at most
/// once. Cluster ids are dense in [0, num_clusters).
struct SopInstance {
  std::vector<double> rewards;
  /// Secondary per-node score (detection-probability proxy); same length as rewards.
  std::vector<double> detection;
  std::vector<int> cluster_of;
  CostMatrix cost;
  int start = 0;
  std::optional<int> end;
  double budget = 0.0;

  std::size_t size() const { return rewards.size(); }
  int num_clusters() const;
  std::vector<std::vector<int>> cluster_members() const;
  double total_reward() const;  // sum of one reward per cluster

  /// Throws InstanceError on shape mismatches, negative rewards or costs,
  /// non-uniform rewards within a cluster, or a bad start/end.
  void validate() const;
};

/// Line-oriented text format:
///   n B s [t]
///   rewards (n values)
///   cluster ids (n values)
///   n rows of n costs ("inf" for missing edges)
///   optional: "detection" followed by n values
/// Lines starting with '#' are comments.
void write_instance(std::ostream& out, const SopInstance& inst);
SopInstance read_instance(std::istream& in);
SopInstance load_instance(const std::string& path);
void save_instance(const std::string& path, const SopInstance& inst);

}  // namespace moon
