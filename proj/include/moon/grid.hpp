#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace moon {

/// Integer grid coordinate (column x, row y).
struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Row-major ordering: lowest (y, x) first. Used for every deterministic tie-break.
inline bool yx_less(const Cell& a, const Cell& b) {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

/// Continuous position in meters.
struct Pose {
  double x_m = 0.0;
  double y_m = 0.0;

  friend bool operator==(const Pose&, const Pose&) = default;
};

inline double distance(const Pose& a, const Pose& b) {
  return std::hypot(a.x_m - b.x_m, a.y_m - b.y_m);
}

inline int chebyshev(const Cell& a, const Cell& b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

/// Length of a single 8-connected move between neighbouring cells.
inline double step_length(const Cell& a, const Cell& b, double resolution_m) {
  const int dx = std::abs(a.x - b.x);
  const int dy = std::abs(a.y - b.y);
  if (dx == 0 && dy == 0) return 0.0;
  return (dx + dy == 2 ? std::sqrt(2.0) : 1.0) * resolution_m;
}

/// Dense row-major 2D array.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int cols, int rows, T fill = T{})
      : cols_(cols), rows_(rows), data_(static_cast<std::size_t>(cols) * rows, fill) {
    if (cols <= 0 || rows <= 0) throw std::invalid_argument("grid dimensions must be positive");
  }

  int cols() const { return cols_; }
  int rows() const { return rows_; }
  std::size_t size() const { return data_.size(); }

  bool in_bounds(const Cell& c) const { return c.x >= 0 && c.y >= 0 && c.x < cols_ && c.y < rows_; }
  std::size_t index(const Cell& c) const { return static_cast<std::size_t>(c.y) * cols_ + c.x; }
  Cell cell(std::size_t index) const {
    return {static_cast<int>(index % cols_), static_cast<int>(index / cols_)};
  }

  T& operator[](const Cell& c) { return data_[index(c)]; }
  const T& operator[](const Cell& c) const { return data_[index(c)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int cols_ = 0;
  int rows_ = 0;
  std::vector<T> data_;
};

/// The eight neighbour offsets, orthogonal ones first.
inline constexpr int kNeighborDx[8] = {1, 0, -1, 0, 1, -1, -1, 1};
inline constexpr int kNeighborDy[8] = {0, 1, 0, -1, 1, 1, -1, -1};

}  // namespace moon
