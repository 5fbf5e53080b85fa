/*
 * Copyright 2026 The Navbench Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "geometry/planner.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <tuple>

namespace navbench {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct OpenEntry {
  double priority;
  int row;
  int col;
  friend bool operator>(const OpenEntry& a, const OpenEntry& b) {
    return std::tie(a.priority, a.row, a.col) > std::tie(b.priority, b.row, b.col);
  }
};

using OpenSet = std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>>;

}  // namespace

double polyline_length(std::span<const WorldPoint> points) {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) total += distance(points[i - 1], points[i]);
  return total;
}

std::optional<PlannedPath> astar(const OccupancyGrid& grid, WorldPoint start, WorldPoint goal) {
  const auto start_cell = grid.cell_of(start);
  const auto goal_cell = grid.cell_of(goal);
  if (!start_cell || !goal_cell) return std::nullopt;
  if (grid.occupied(*start_cell) || grid.occupied(*goal_cell)) return std::nullopt;

  if (*start_cell == *goal_cell) {
    PlannedPath path;
    path.waypoints.push_back(start);
    if (!(start == goal)) path.waypoints.push_back(goal);
    path.length = polyline_length(path.waypoints);
    return path;
  }

  auto position = [&](Cell c) {
    if (c == *start_cell) return start;
    if (c == *goal_cell) return goal;
    return grid.cell_center(c);
  };

  const std::size_t n = grid.cell_count();
  std::vector<double> g(n, kInf);
  std::vector<std::int64_t> parent(n, -1);
  std::vector<std::uint8_t> closed(n, 0);
  OpenSet open;

  const std::size_t s = grid.index(*start_cell);
  const std::size_t t = grid.index(*goal_cell);
  g[s] = 0.0;
  open.push({distance(start, goal), start_cell->row, start_cell->col});

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    const Cell cur{top.row, top.col};
    const std::size_t ci = grid.index(cur);
    if (closed[ci]) continue;
    closed[ci] = 1;
    if (ci == t) break;
    const WorldPoint cur_pos = position(cur);
    for_each_move(grid, cur, [&](Cell next) {
      const std::size_t ni = grid.index(next);
      if (closed[ni]) return;
      const WorldPoint next_pos = position(next);
      const double cand = g[ci] + distance(cur_pos, next_pos);
      if (cand < g[ni]) {
        g[ni] = cand;
        parent[ni] = static_cast<std::int64_t>(ci);
        open.push({cand + distance(next_pos, goal), next.row, next.col});
      }
    });
  }
  if (!closed[t]) return std::nullopt;

  PlannedPath path;
  for (std::int64_t i = static_cast<std::int64_t>(t); i >= 0; i = parent[static_cast<std::size_t>(i)]) {
    path.waypoints.push_back(position(grid.cell_at(static_cast<std::size_t>(i))));
  }
  std::reverse(path.waypoints.begin(), path.waypoints.end());
  path.length = polyline_length(path.waypoints);
  return path;
}

std::optional<double> geodesic_distance(const OccupancyGrid& grid, WorldPoint a, WorldPoint b) {
  auto path = astar(grid, a, b);
  if (!path) return std::nullopt;
  return path->length;
}

DistanceField::DistanceField(const OccupancyGrid& grid, WorldPoint source)
    : grid_(&grid), dist_(grid.cell_count(), kInf) {
  const auto source_cell = grid.cell_of(source);
  if (!source_cell || grid.occupied(*source_cell)) return;
  auto position = [&](Cell c) { return c == *source_cell ? source : grid.cell_center(c); };

  OpenSet open;
  dist_[grid.index(*source_cell)] = 0.0;
  open.push({0.0, source_cell->row, source_cell->col});
  std::vector<std::uint8_t> closed(grid.cell_count(), 0);
  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    const Cell cur{top.row, top.col};
    const std::size_t ci = grid.index(cur);
    if (closed[ci]) continue;
    closed[ci] = 1;
    const WorldPoint cur_pos = position(cur);
    for_each_move(grid, cur, [&](Cell next) {
      const std::size_t ni = grid.index(next);
      if (closed[ni]) return;
      const double cand = dist_[ci] + distance(cur_pos, position(next));
      if (cand < dist_[ni]) {
        dist_[ni] = cand;
        open.push({cand, next.row, next.col});
      }
    });
  }
}

double DistanceField::at(Cell c) const {
  if (!grid_->in_bounds(c)) return kInf;
  return dist_[grid_->index(c)];
}

double DistanceField::at(WorldPoint p) const { return at(grid_->locate(p)); }

std::vector<int> label_free_components(const OccupancyGrid& grid, int* count) {
  std::vector<int> label(grid.cell_count(), -1);
  int next_label = 0;
  std::deque<Cell> queue;
  for (std::size_t i = 0; i < grid.cell_count(); ++i) {
    const Cell seed = grid.cell_at(i);
    if (grid.occupied(seed) || label[i] >= 0) continue;
    label[i] = next_label;
    queue.push_back(seed);
    while (!queue.empty()) {
      const Cell cur = queue.front();
      queue.pop_front();
      for_each_move(grid, cur, [&](Cell next) {
        const std::size_t ni = grid.index(next);
        if (label[ni] < 0) {
          label[ni] = next_label;
          queue.push_back(next);
        }
      });
    }
    ++next_label;
  }
  if (count) *count = next_label;
  return label;
}

}  // namespace navbench
