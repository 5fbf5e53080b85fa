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

#include <optional>
#include <string>
#include <vector>

#include "common/json_util.hpp"
#include "common/rng.hpp"
#include "env/scene_context.hpp"
#include "sim/pose.hpp"
#include "tasks/episode.hpp"

namespace navbench {

struct OracleHint {
  double bearing_to_goal = 0.0;  // relative to the agent heading
  std::optional<double> geodesic_remaining;  // null when unreachable
};

struct OracleAnswer {
  std::string text;
  std::vector<std::string> facts_used;  // scene-graph edge ids
  OracleHint hint;
};

// Scripted answers: the target's relation when the query names the target
// or asks where, the room of the next stretch of reference path when it
// names a room or asks which way, and always the bearing/distance hint.
// Throws kOracleDisabled unless the episode enables the oracle.
OracleAnswer oracle_answer(const std::string& query, const Episode& episode, const Pose& pose,
                           const SceneContext& ctx);

Json oracle_answer_to_json(const OracleAnswer& a);

struct SupervisionStep {
  std::vector<WorldPoint> candidates;
  std::size_t oracle_index = 0;
  bool oracle_stop = false;
  bool from_oracle = true;  // sampled_action_source
};

// Candidate closest to the target by agent-grid geodesic (ties by list
// order, unreachable candidates last); the action source is the oracle with
// probability `ratio`.
SupervisionStep supervise(const SceneContext& ctx, const std::vector<WorldPoint>& candidates, const Pose& agent,
                          WorldPoint target, double ratio, Rng& rng);

struct ScheduleParams {
  double ratio = 0.85;
  int decay_time = 4;
};

// Teacher-forcing ratio for a training epoch: ratio^(epoch / decay_time + 1).
double scheduled_ratio(const ScheduleParams& p, int epoch);

}  // namespace navbench
