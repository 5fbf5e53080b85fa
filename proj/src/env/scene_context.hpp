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

#include <memory>
#include <optional>

#include "env/occupancy.hpp"
#include "env/scene.hpp"
#include "env/scene_graph.hpp"
#include "sim/agent_body.hpp"

namespace navbench {

struct NavigationParams {
  double resolution = kDefaultResolution;
  // Extra inflation on top of the agent radius for the planning grid.
  // Defaults to resolution * sqrt(2): that makes every straight segment
  // between adjacent free cell centers keep the agent disc clear of all
  // occupied cell rectangles, so reference paths are physically drivable.
  std::optional<double> planning_margin;

  double margin() const;
  double nav_radius(const AgentBody& agent) const { return agent.radius + margin(); }
};

// Immutable per-scene derived data shared by the simulator, the task
// generators and the scorer.
class SceneContext {
 public:
  SceneContext(Scene scene, AgentBody agent, NavigationParams nav, SceneGraphParams graph_params = {});

  const Scene& scene() const { return scene_; }
  const AgentBody& agent() const { return agent_; }
  const NavigationParams& nav_params() const { return nav_; }
  // Walls and obstacles only; collision geometry.
  const OccupancyGrid& raw_grid() const { return raw_; }
  // raw_grid dilated by exactly the agent radius. Scoring, geodesic
  // distances and "stands in open space" checks use this one.
  const OccupancyGrid& agent_grid() const { return agent_grid_; }
  // raw_grid dilated by the agent radius plus planning margin. Paths are
  // planned and start/goal points sampled here.
  const OccupancyGrid& nav_grid() const { return nav_grid_; }
  const SceneGraph& graph() const { return graph_; }

 private:
  Scene scene_;
  AgentBody agent_;
  NavigationParams nav_;
  OccupancyGrid raw_;
  OccupancyGrid agent_grid_;
  OccupancyGrid nav_grid_;
  SceneGraph graph_;
};

using SceneContextPtr = std::shared_ptr<const SceneContext>;

SceneContextPtr make_scene_context(Scene scene, AgentBody agent = {}, NavigationParams nav = {});

}  // namespace navbench
