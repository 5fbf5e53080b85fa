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

#include "geometry/types.hpp"

namespace navbench {

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;  // radians in [-pi, pi)

  WorldPoint position() const { return {x, y}; }
  friend bool operator==(const Pose&, const Pose&) = default;
};

inline Pose make_pose(WorldPoint p, double yaw) { return {p.x, p.y, normalize_angle(yaw)}; }

}  // namespace navbench
