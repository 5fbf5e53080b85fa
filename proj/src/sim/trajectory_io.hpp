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

#include <string>

#include "common/json_util.hpp"
#include "sim/types.hpp"

namespace navbench {

// {"type": "discrete", "primitive": "FORWARD"} | {"type": "continuous", v,
// omega, dt} | {"type": "waypoint_hop", "target": [x, y]} |
// {"type": "oracle_query", "text": ...}
Json action_to_json(const Action& a);
Action action_from_json(const JsonReader& j);

Json trajectory_to_json(const Trajectory& t);
Trajectory trajectory_from_json(const JsonReader& j);
Trajectory load_trajectory_json(const std::string& path);

// Header `t,x,y,yaw`, one row per sample, 6 decimals.
std::string trajectory_to_csv(const Trajectory& t);
// Rebuilds samples only. The CSV carries no actions, so callers decide how
// to fill the remaining fields.
std::vector<TrajectorySample> samples_from_csv(const std::string& text, const std::string& source);

}  // namespace navbench
