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

#include "geometry/ray_cast.hpp"

#include <cmath>
#include <limits>

namespace navbench {

double ray_cast(const OccupancyGrid& grid, WorldPoint origin, double bearing, double max_range) {
  if (!(max_range > 0.0)) return 0.0;
  Cell cell = grid.locate(origin);
  if (grid.occupied(cell)) return 0.0;

  const double res = grid.resolution();
  const double dx = std::cos(bearing);
  const double dy = std::sin(bearing);
  const double gx = (origin.x - grid.origin().x) / res;
  const double gy = (origin.y - grid.origin().y) / res;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Distances (meters) along the ray to the next vertical / horizontal cell boundary.
  const int step_col = dx > 0 ? 1 : -1;
  const int step_row = dy > 0 ? 1 : -1;
  double t_max_x = kInf;
  double t_max_y = kInf;
  double t_delta_x = kInf;
  double t_delta_y = kInf;
  if (std::abs(dx) > 1e-15) {
    const double boundary = dx > 0 ? cell.col + 1.0 : static_cast<double>(cell.col);
    t_max_x = (boundary - gx) / dx * res;
    t_delta_x = res / std::abs(dx);
  }
  if (std::abs(dy) > 1e-15) {
    const double boundary = dy > 0 ? cell.row + 1.0 : static_cast<double>(cell.row);
    t_max_y = (boundary - gy) / dy * res;
    t_delta_y = res / std::abs(dy);
  }

  while (true) {
    double t;
    if (t_max_x <= t_max_y) {
      t = t_max_x;
      t_max_x += t_delta_x;
      cell.col += step_col;
    } else {
      t = t_max_y;
      t_max_y += t_delta_y;
      cell.row += step_row;
    }
    if (t >= max_range) return max_range;
    if (grid.occupied(cell)) return std::max(0.0, t);
  }
}

}  // namespace navbench
