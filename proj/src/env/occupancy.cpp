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

#include "env/occupancy.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"

namespace navbench {
namespace {

// Snap tolerance for coordinates that sit on grid lines up to float noise.
constexpr double kSnap = 1e-6;

int axis_index(double v, double origin, double res, int n) {
  const int i = static_cast<int>(std::floor((v - origin) / res + kSnap));
  return std::clamp(i, 0, n - 1);
}

}  // namespace

OccupancyGrid build_occupancy(const Scene& scene, double resolution, double agent_height) {
  if (!(resolution > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "build_occupancy: resolution must be > 0");
  }
  const int width = std::max(1, static_cast<int>(std::ceil(scene.bounds.width() / resolution - kSnap)));
  const int height = std::max(1, static_cast<int>(std::ceil(scene.bounds.height() / resolution - kSnap)));
  OccupancyGrid grid(resolution, scene.bounds.min, width, height);
  const WorldPoint o = grid.origin();
  auto col_of = [&](double x) { return axis_index(x, o.x, resolution, width); };
  auto row_of = [&](double y) { return axis_index(y, o.y, resolution, height); };

  for (const auto& room : scene.rooms) {
    const Rect& f = room.footprint;
    const int c0 = col_of(f.min.x), c1 = col_of(f.max.x);
    const int r0 = row_of(f.min.y), r1 = row_of(f.max.y);
    for (int c = c0; c <= c1; ++c) {
      grid.set_occupied({r0, c});
      grid.set_occupied({r1, c});
    }
    for (int r = r0; r <= r1; ++r) {
      grid.set_occupied({r, c0});
      grid.set_occupied({r, c1});
    }
  }

  // Openings are cut after all walls so a door declared by one room also
  // opens the coincident wall of its neighbour.
  for (const auto& room : scene.rooms) {
    for (const auto& door : room.doors) {
      const bool horizontal = std::abs(door.a.y - door.b.y) < kSnap;
      if (horizontal) {
        const int r = row_of(door.a.y);
        const double lo = std::min(door.a.x, door.b.x), hi = std::max(door.a.x, door.b.x);
        for (int c = col_of(lo); c <= col_of(hi); ++c) {
          const double cx = grid.cell_center({r, c}).x;
          if (cx > lo && cx < hi) grid.set_occupied({r, c}, false);
        }
      } else {
        const int c = col_of(door.a.x);
        const double lo = std::min(door.a.y, door.b.y), hi = std::max(door.a.y, door.b.y);
        for (int r = row_of(lo); r <= row_of(hi); ++r) {
          const double cy = grid.cell_center({r, c}).y;
          if (cy > lo && cy < hi) grid.set_occupied({r, c}, false);
        }
      }
    }
  }

  for (const auto& obj : scene.objects) {
    if (!obj.is_obstacle) continue;
    if (!(obj.base_height < agent_height) || !(obj.top_height > 0.0)) continue;
    const Rect b = footprint_bounds(obj.footprint);
    for (int r = row_of(b.min.y); r <= row_of(b.max.y); ++r) {
      for (int c = col_of(b.min.x); c <= col_of(b.max.x); ++c) {
        if (footprint_overlaps(obj.footprint, grid.cell_rect({r, c}))) grid.set_occupied({r, c});
      }
    }
  }
  return grid;
}

}  // namespace navbench
