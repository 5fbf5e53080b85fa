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

#include "env/scene_context.hpp"

#include <cmath>
#include <numbers>

namespace navbench {

double NavigationParams::margin() const {
  return planning_margin.value_or(resolution * std::numbers::sqrt2);
}

SceneContext::SceneContext(Scene scene, AgentBody agent, NavigationParams nav,
                           SceneGraphParams graph_params)
    : scene_(std::move(scene)),
      agent_(agent),
      nav_(nav),
      raw_(build_occupancy(scene_, nav.resolution, agent.height)),
      agent_grid_(dilate(raw_, agent.radius)),
      nav_grid_(dilate(raw_, nav.nav_radius(agent))),
      graph_(build_scene_graph(scene_, graph_params)) {
  agent_.validate();
}

SceneContextPtr make_scene_context(Scene scene, AgentBody agent, NavigationParams nav) {
  return std::make_shared<const SceneContext>(std::move(scene), agent, nav);
}

}  // namespace navbench
