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

#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "geometry/occupancy_grid.hpp"

namespace navbench {

struct PlannedPath {
  // The exact start, then intermediate cell centers, then the exact goal.
  std::vector<WorldPoint> waypoints;
  double length = 0.0;
};

double polyline_length(std::span<const WorldPoint> points);

// Visits the 8-connected free neighbours of `from`. A diagonal move is
// allowed only when both orthogonal cells it sweeps past are free.
template <typename Fn>
void for_each_move(const OccupancyGrid& grid, Cell from, Fn&& fn) {
  static constexpr int kDr[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
  static constexpr int kDc[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
  for (int k = 0; k < 8; ++k) {
    const Cell to{from.row + kDr[k], from.col + kDc[k]};
    if (grid.occupied(to)) continue;
    if (kDr[k] != 0 && kDc[k] != 0) {
      if (grid.occupied({from.row + kDr[k], from.col}) ||
          grid.occupied({from.row, from.col + kDc[k]})) {
        continue;
      }
    }
    fn(to);
  }
}

// Minimum-length 8-connected path over free cells. Edge costs are Euclidean
// distances between the exact start/goal points and intermediate cell
// centers, so the result is symmetric in (start, goal). Returns nullopt when
// either endpoint cell is occupied or the two are disconnected.
std::optional<PlannedPath> astar(const OccupancyGrid& grid, WorldPoint start, WorldPoint goal);

std::optional<double> geodesic_distance(const OccupancyGrid& grid, WorldPoint a, WorldPoint b);

// Single-source shortest distances from `source` to every free cell center,
// with the same move rules and costs as astar().
class DistanceField {
 public:
  DistanceField(const OccupancyGrid& grid, WorldPoint source);

  // +inf for occupied or unreachable cells.
  double at(Cell c) const;
  double at(WorldPoint p) const;
  bool reachable(Cell c) const { return std::isfinite(at(c)); }

 private:
  OccupancyGrid const* grid_;
  std::vector<double> dist_;
};

// 8-connected free components (same move rule as the planner). Occupied
// cells get label -1; labels are dense from 0 in row-major discovery order.
std::vector<int> label_free_components(const OccupancyGrid& grid, int* count = nullptr);

}  // namespace navbench
