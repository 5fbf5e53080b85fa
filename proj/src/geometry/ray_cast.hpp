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

#include "geometry/occupancy_grid.hpp"

namespace navbench {

inline constexpr double kDefaultMaxRange = 10.0;

// Distance from `origin` along `bearing` (radians, world frame) to the first
// occupied-cell boundary, clamped to max_range. Cells outside the raster count
// as occupied; an origin inside an occupied cell returns 0.
double ray_cast(const OccupancyGrid& grid, WorldPoint origin, double bearing,
                double max_range = kDefaultMaxRange);

}  // namespace navbench
