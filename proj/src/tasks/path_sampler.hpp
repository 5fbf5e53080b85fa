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

#include <cstdint>
#include <optional>
#include <string>

#include "env/scene_context.hpp"
#include "geometry/planner.hpp"
#include "sim/pose.hpp"

namespace navbench {

struct PathConstraints {
  double min_geodesic = 3.0;
  double max_geodesic = 15.0;
  int max_tries = 1000;

  void validate() const;
};

struct PathSample {
  Pose start;
  WorldPoint goal;
  PlannedPath path;
  std::optional<std::string> target_object_id;
};

// Start and goal drawn uniformly from free navigation cells (cell centers),
// redrawn until the geodesic length falls inside the constraints. Throws
// kSamplingExhausted after max_tries draws.
PathSample sample_path(const SceneContext& ctx, const PathConstraints& constraints, std::uint64_t seed);

// Same, but the goal is the free navigation point nearest to a randomly
// chosen object that can anchor a coarse instruction. A fixed start (which
// must be a free navigation point) replaces the random start draw.
PathSample sample_object_path(const SceneContext& ctx, const PathConstraints& constraints, std::uint64_t seed,
                              std::optional<WorldPoint> fixed_start = std::nullopt);

// Yaw of the first non-degenerate path segment, or 0 for a single point.
double initial_heading(const PlannedPath& path);

}  // namespace navbench
