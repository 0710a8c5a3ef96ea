#include "moon/grid_path.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <utility>

namespace moon {

namespace {

using QueueEntry = std::pair<double, std::int32_t>;
using MinQueue = std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>>;

bool can_move(const PassableGrid& g, const Cell& from, int k, Cell& to) {
  to = {from.x + kNeighborDx[k], from.y + kNeighborDy[k]};
  if (!g.in_bounds(to) || !g[to]) return false;
  if (k >= 4) {
    // no corner cutting
    if (!g[Cell{to.x, from.y}] || !g[Cell{from.x, to.y}]) return false;
  }
  return true;
}

double octile(const Cell& a, const Cell& b, double res) {
  const double dx = std::abs(a.x - b.x);
  const double dy = std::abs(a.y - b.y);
  return (std::max(dx, dy) + (std::sqrt(2.0) - 1.0) * std::min(dx, dy)) * res;
}

}  // namespace

std::vector<Cell> DistanceField::path_to(const Cell& to) const {
  std::vector<Cell> path;
  if (!dist.in_bounds(to) || !reached(to)) return path;
  std::int32_t cur = static_cast<std::int32_t>(dist.index(to));
  while (cur >= 0) {
    path.push_back(dist.cell(static_cast<std::size_t>(cur)));
    cur = parent[static_cast<std::size_t>(cur)];
  }
  std::reverse(path.begin(), path.end());
  return path;
}

DistanceField dijkstra(const PassableGrid& passable, Cell source, double resolution_m,
                       std::span<const Cell> stop_after) {
  DistanceField out{Grid<double>(passable.cols(), passable.rows(), kUnreachable),
                    Grid<std::int32_t>(passable.cols(), passable.rows(), -1)};
  if (!passable.in_bounds(source) || !passable[source]) return out;

  Grid<std::uint8_t> is_target(passable.cols(), passable.rows(), 0);
  std::size_t remaining = 0;
  for (const Cell& c : stop_after) {
    if (passable.in_bounds(c) && !is_target[c]) {
      is_target[c] = 1;
      ++remaining;
    }
  }
  const bool early_exit = remaining > 0;

  Grid<std::uint8_t> settled(passable.cols(), passable.rows(), 0);
  MinQueue queue;
  out.dist[source] = 0.0;
  queue.emplace(0.0, static_cast<std::int32_t>(passable.index(source)));
  const double diag = std::sqrt(2.0) * resolution_m;

  while (!queue.empty()) {
    const auto [d, idx] = queue.top();
    queue.pop();
    const auto uidx = static_cast<std::size_t>(idx);
    if (settled[uidx]) continue;
    settled[uidx] = 1;
    if (early_exit && is_target[uidx] && --remaining == 0) break;

    const Cell u = passable.cell(uidx);
    for (int k = 0; k < 8; ++k) {
      Cell v;
      if (!can_move(passable, u, k, v)) continue;
      const double nd = d + (k >= 4 ? diag : resolution_m);
      const std::size_t vidx = passable.index(v);
      if (nd < out.dist[vidx]) {
        out.dist[vidx] = nd;
        out.parent[vidx] = idx;
        queue.emplace(nd, static_cast<std::int32_t>(vidx));
      }
    }
  }
  return out;
}

std::optional<std::vector<Cell>> shortest_path(const PassableGrid& passable, Cell from, Cell to,
                                               double resolution_m) {
  if (!passable.in_bounds(from) || !passable.in_bounds(to) || !passable[from] || !passable[to]) {
    return std::nullopt;
  }
  if (from == to) return std::vector<Cell>{from};

  Grid<double> g(passable.cols(), passable.rows(), kUnreachable);
  Grid<std::int32_t> parent(passable.cols(), passable.rows(), -1);
  Grid<std::uint8_t> closed(passable.cols(), passable.rows(), 0);
  MinQueue open;
  g[from] = 0.0;
  open.emplace(octile(from, to, resolution_m), static_cast<std::int32_t>(passable.index(from)));
  const double diag = std::sqrt(2.0) * resolution_m;
  const std::size_t goal = passable.index(to);

  while (!open.empty()) {
    const auto [f, idx] = open.top();
    open.pop();
    const auto uidx = static_cast<std::size_t>(idx);
    if (closed[uidx]) continue;
    closed[uidx] = 1;
    if (uidx == goal) break;
    const Cell u = passable.cell(uidx);
    for (int k = 0; k < 8; ++k) {
      Cell v;
      if (!can_move(passable, u, k, v)) continue;
      const std::size_t vidx = passable.index(v);
      if (closed[vidx]) continue;
      const double ng = g[uidx] + (k >= 4 ? diag : resolution_m);
      if (ng < g[vidx]) {
        g[vidx] = ng;
        parent[vidx] = idx;
        open.emplace(ng + octile(v, to, resolution_m), static_cast<std::int32_t>(vidx));
      }
    }
  }
  if (!closed[goal]) return std::nullopt;

  std::vector<Cell> path;
  for (std::int32_t cur = static_cast<std::int32_t>(goal); cur >= 0;
       cur = parent[static_cast<std::size_t>(cur)]) {
    path.push_back(passable.cell(static_cast<std::size_t>(cur)));
  }
  std::reverse(path.begin(), path.end());
  return path;
}

double path_length(std::span<const Cell> path, double resolution_m) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) total += step_length(path[i - 1], path[i], resolution_m);
  return total;
}

}  // namespace moon
