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

#include <vector>

#include "env/scene_context.hpp"
#include "sim/types.hpp"

namespace navbench {

// Range readings at num_bearings evenly spaced headings relative to the
// agent yaw, starting straight ahead and increasing counter-clockwise.
std::vector<RangeReading> range_scan(const OccupancyGrid& grid, const Pose& pose, const SensorConfig& cfg);

// Objects within max_range whose center ray reaches the object (or the
// furniture it rests on) before hitting any other occupied cell.
std::vector<Detection> detect_objects(const SceneContext& ctx, const Pose& pose, const SensorConfig& cfg);

Observation observe(const SceneContext& ctx, const Pose& pose, const SensorConfig& cfg, int step_index,
                    bool collided_last_step);

}  // namespace navbench
