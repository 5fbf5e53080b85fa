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

#include "env/scene.hpp"
#include "geometry/occupancy_grid.hpp"

namespace navbench {

inline constexpr double kDefaultResolution = 0.05;

// Rasterizes walls (room boundaries minus door openings, one cell thick) and
// obstacles whose vertical extent overlaps [0, agent_height). The raster
// covers the scene bounds exactly; everything outside it reads as occupied.
OccupancyGrid build_occupancy(const Scene& scene, double resolution, double agent_height);

}  // namespace navbench
