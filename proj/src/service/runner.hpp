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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eval/scoring.hpp"
#include "service/agents.hpp"
#include "service/oracle.hpp"
#include "sim/simulator.hpp"
#include "tasks/dataset.hpp"

namespace navbench {

// Steps the agent until the simulator reports done.
Trajectory run_episode(SceneContextPtr ctx, const Episode& episode, Agent& agent, const SimConfig& config,
                       std::uint64_t seed);

struct RunOptions {
  AgentKind agent = AgentKind::kOracleFollower;
  SimConfig sim;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct RunOutput {
  std::vector<Trajectory> trajectories;  // same order as results
  MetricsReport report;
};

// Runs and scores every episode; per-episode agent seeds come from
// (seed, episode_id), and results are merged sorted by episode_id, so the
// output does not depend on the thread count.
RunOutput run_episodes(const LoadedDataset& dataset, const std::vector<const Episode*>& episodes,
                       const RunOptions& options);

// Waypoint candidates on a ring around the agent, `count` bearings starting
// at the heading; points off the agent grid's free space are dropped. Falls
// back to the agent's own position when nothing is free.
std::vector<WorldPoint> ring_candidates(const SceneContext& ctx, const Pose& pose, double radius = 1.0,
                                        int count = 12);

// Learner stand-in: picks a candidate index, or nullopt to stop.
using CandidatePolicy =
    std::function<std::optional<std::size_t>(const Observation&, const std::vector<WorldPoint>&)>;

struct RolloutRecord {
  SupervisionStep supervision;
  std::optional<std::size_t> predicted;  // nullopt = predicted stop
  bool executed_stop = false;
  WorldPoint executed_target;  // hop target when not stopping
};

struct SupervisedRollout {
  Trajectory trajectory;
  std::vector<RolloutRecord> transcript;
};

// Online-training loop in waypoint-hop mode: at each step the oracle label
// is computed, then the executed action comes from the oracle with
// probability `ratio` and from `policy` otherwise. The target is the final
// goal. Throws kInvalidArgument unless config.mode is TelHop.
SupervisedRollout supervised_rollout(SceneContextPtr ctx, const Episode& episode, const CandidatePolicy& policy,
                                     double ratio, std::uint64_t seed, const SimConfig& config);

ReportConfig report_config(const SimConfig& sim, const std::string& agent, double resolution);

}  // namespace navbench
