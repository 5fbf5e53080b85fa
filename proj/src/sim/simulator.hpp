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

#include "env/scene_context.hpp"
#include "sim/types.hpp"
#include "tasks/episode.hpp"

namespace navbench {

// Executes one episode at a time for an embodied disc agent. Not thread-safe;
// one instance per worker.
class Simulator {
 public:
  explicit Simulator(SceneContextPtr ctx, SimConfig config = {}, SensorConfig sensor = {});

  // Throws kInvalidEpisode for a scene mismatch or a start pose that is
  // off-grid or not free on the navigation grid.
  Observation reset(const Episode& episode);

  // Throws kEpisodeFinished after done, kUnsupportedAction for hops in
  // Strict mode (and for oracle queries, which sessions answer), and
  // kInvalidAction for commands outside the agent's limits.
  StepResult step(const Action& action);

  Observation sense() const;

  const SceneContext& context() const { return *ctx_; }
  const SimConfig& config() const { return config_; }
  const Episode& episode() const { return *episode_; }
  const Trajectory& trajectory() const { return trajectory_; }
  Pose pose() const { return pose_; }
  int step_count() const { return steps_; }
  bool active() const { return episode_.has_value() && !done_; }
  bool done() const { return done_; }
  double time() const { return static_cast<double>(tick_) * config_.substep; }

 private:
  struct MotionOutcome {
    double blocked = 0.0;
    std::optional<WorldPoint> contact;
  };

  MotionOutcome integrate(const ContinuousAction& cmd);
  ContinuousAction primitive_command(Primitive p) const;
  void validate_command(const ContinuousAction& cmd) const;
  void record_sample();
  void finish(DoneReason reason);

  SceneContextPtr ctx_;
  SimConfig config_;
  SensorConfig sensor_;
  std::optional<Episode> episode_;
  Pose pose_;
  std::int64_t tick_ = 0;
  int steps_ = 0;
  bool done_ = false;
  bool collided_last_ = false;
  Trajectory trajectory_;
};

}  // namespace navbench
