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
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "env/scene_context.hpp"
#include "sim/types.hpp"
#include "tasks/episode.hpp"

namespace navbench {

inline constexpr double kOracleStopThreshold = 1.5;

// Policy mapping observations to actions. One instance per episode runner.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual void reset(const Episode& episode, SceneContextPtr ctx, const SimConfig& config, std::uint64_t seed) = 0;
  virtual Action act(const Observation& obs) = 0;
};

enum class AgentKind { kOracleFollower, kRandom, kGreedy };
std::string_view agent_kind_name(AgentKind k);
std::optional<AgentKind> parse_agent_kind(std::string_view name);
std::unique_ptr<Agent> make_agent(AgentKind kind);

// Reference polyline reduced to vertices the disc can drive between without
// touching raw obstacles; no vertex strays more than `tolerance` from the
// original path.
std::vector<WorldPoint> drivable_simplification(const SceneContext& ctx, const std::vector<WorldPoint>& path,
                                                double tolerance = 0.1);

// geodesic(agent, target) < 1.5 m on the agent grid and the agent cell free.
bool oracle_stop_condition(const SceneContext& ctx, WorldPoint agent, WorldPoint target);

}  // namespace navbench
