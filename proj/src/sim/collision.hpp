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

#include <optional>

#include "geometry/occupancy_grid.hpp"

namespace navbench {

// Penetration below this depth is treated as touching.
inline constexpr double kContactTolerance = 1e-9;

// Whether a disc overlaps any occupied cell rectangle (cells outside the
// raster count as occupied).
bool disc_overlaps(const OccupancyGrid& grid, WorldPoint center, double radius);

// Distance from p to the nearest occupied cell rectangle, searching up to
// `search_radius`; returns search_radius when nothing is closer.
double rect_clearance(const OccupancyGrid& grid, WorldPoint p, double search_radius);

// Minimum distance between the segment ab and any occupied cell rectangle,
// capped at `cap`.
double segment_clearance(const OccupancyGrid& grid, WorldPoint a, WorldPoint b, double cap);

struct MoveResult {
  WorldPoint position;
  double blocked = 0.0;  // |commanded| - |achieved|
  std::optional<WorldPoint> contact;
};

// Moves a disc by `displacement`, stopping at first contact. With sliding the
// unrealized part of the motion is projected onto the contact tangent and
// attempted once more.
MoveResult resolve_move(const OccupancyGrid& grid, WorldPoint from, WorldPoint displacement, double radius,
                        bool allow_sliding);

}  // namespace navbench
