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

#include "geometry/occupancy_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "common/error.hpp"

namespace navbench {

OccupancyGrid::OccupancyGrid(double resolution, WorldPoint origin, int width, int height)
    : resolution_(resolution), origin_(origin), width_(width), height_(height) {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw Error(ErrorCode::kInvalidArgument, "grid resolution must be > 0");
  }
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidArgument, "grid width and height must be >= 1");
  }
  if (!is_finite(origin)) {
    throw Error(ErrorCode::kInvalidArgument, "grid origin must be finite");
  }
  cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

void OccupancyGrid::set_occupied(Cell c, bool value) {
  if (!in_bounds(c)) return;
  cells_[index(c)] = value ? 1 : 0;
}

Cell OccupancyGrid::locate(WorldPoint p) const {
  const double gx = std::floor((p.x - origin_.x) / resolution_);
  const double gy = std::floor((p.y - origin_.y) / resolution_);
  constexpr double kLimit = 1e9;
  return {static_cast<int>(std::clamp(gy, -kLimit, kLimit)),
          static_cast<int>(std::clamp(gx, -kLimit, kLimit))};
}

std::optional<Cell> OccupancyGrid::cell_of(WorldPoint p) const {
  if (!is_finite(p)) return std::nullopt;
  const Cell c = locate(p);
  if (!in_bounds(c)) return std::nullopt;
  return c;
}

WorldPoint OccupancyGrid::cell_center(Cell c) const {
  return {origin_.x + (c.col + 0.5) * resolution_, origin_.y + (c.row + 0.5) * resolution_};
}

Rect OccupancyGrid::cell_rect(Cell c) const {
  const WorldPoint lo{origin_.x + c.col * resolution_, origin_.y + c.row * resolution_};
  return {lo, {lo.x + resolution_, lo.y + resolution_}};
}

Rect OccupancyGrid::extent() const {
  return {origin_, {origin_.x + width_ * resolution_, origin_.y + height_ * resolution_}};
}

std::size_t OccupancyGrid::occupied_count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

OccupancyGrid dilate(const OccupancyGrid& grid, double radius) {
  if (!(radius > 0.0)) return grid;
  const double r_cells = radius / grid.resolution();
  const double r2 = r_cells * r_cells + 1e-9;
  const int reach = static_cast<int>(std::floor(r_cells + 1e-9));
  std::vector<std::pair<int, int>> kernel;
  for (int dr = -reach; dr <= reach; ++dr) {
    for (int dc = -reach; dc <= reach; ++dc) {
      if (static_cast<double>(dr * dr + dc * dc) <= r2) kernel.emplace_back(dr, dc);
    }
  }
  OccupancyGrid out = grid;
  for (int row = 0; row < grid.height(); ++row) {
    for (int col = 0; col < grid.width(); ++col) {
      if (!grid.occupied({row, col})) continue;
      for (const auto& [dr, dc] : kernel) out.set_occupied({row + dr, col + dc});
    }
  }
  return out;
}

WorldPoint nearest_free_point(const OccupancyGrid& grid, WorldPoint p) {
  const Cell home = grid.locate(p);
  if (grid.free(home)) return grid.cell_center(home);

  const double res = grid.resolution();
  const int max_ring = grid.width() + grid.height() + std::max(std::abs(home.row), std::abs(home.col));
  double best_d = std::numeric_limits<double>::infinity();
  Cell best{-1, -1};
  auto consider = [&](Cell c) {
    if (!grid.in_bounds(c) || grid.occupied(c)) return;
    const double d = distance(grid.cell_center(c), p);
    if (std::tie(d, c.row, c.col) < std::tie(best_d, best.row, best.col)) {
      best_d = d;
      best = c;
    }
  };
  for (int k = 1; k <= max_ring; ++k) {
    // Any cell on Chebyshev ring k is at least (k - 1) cells away from p.
    if (best.row >= 0 && (k - 1) * res > best_d) break;
    for (int dc = -k; dc <= k; ++dc) {
      consider({home.row - k, home.col + dc});
      consider({home.row + k, home.col + dc});
    }
    for (int dr = -k + 1; dr <= k - 1; ++dr) {
      consider({home.row + dr, home.col - k});
      consider({home.row + dr, home.col + k});
    }
  }
  if (best.row < 0) {
    throw Error(ErrorCode::kInvalidArgument, "nearest_free_point: grid has no free cell");
  }
  return grid.cell_center(best);
}

}  // namespace navbench
