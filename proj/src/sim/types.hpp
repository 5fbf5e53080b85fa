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

#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geometry/types.hpp"
#include "sim/pose.hpp"

namespace navbench {

enum class Primitive { kForward, kTurnLeft, kTurnRight, kStop };

struct DiscreteAction {
  Primitive primitive = Primitive::kStop;
  friend bool operator==(const DiscreteAction&, const DiscreteAction&) = default;
};

struct ContinuousAction {
  double v = 0.0;      // m/s
  double omega = 0.0;  // rad/s, positive turns left
  double dt = 0.0;     // s
  friend bool operator==(const ContinuousAction&, const ContinuousAction&) = default;
};

struct WaypointHop {
  WorldPoint target;
  friend bool operator==(const WaypointHop&, const WaypointHop&) = default;
};

struct OracleQuery {
  std::string text;
  friend bool operator==(const OracleQuery&, const OracleQuery&) = default;
};

using Action = std::variant<DiscreteAction, ContinuousAction, WaypointHop, OracleQuery>;

inline Action stop_action() { return DiscreteAction{Primitive::kStop}; }
bool is_stop(const Action& a);

std::string_view primitive_name(Primitive p);
std::optional<Primitive> parse_primitive(std::string_view name);

enum class SimMode { kStrict, kTelHop };
std::string_view sim_mode_name(SimMode m);
std::optional<SimMode> parse_sim_mode(std::string_view name);

// Fixed magnitudes of the discrete primitives.
struct PrimitiveParams {
  double forward_distance = 0.25;
  double turn_angle = std::numbers::pi / 12.0;  // 15 degrees
};

struct SimConfig {
  SimMode mode = SimMode::kStrict;
  bool allow_sliding = true;
  double collision_thresh = 0.10;
  int max_steps = 200;
  double success_thresh = 3.0;
  double substep = 0.05;
  PrimitiveParams primitives;

  void validate() const;
};

struct SensorConfig {
  int num_bearings = 12;  // evenly spaced over 360 degrees
  double max_range = 10.0;
};

struct RangeReading {
  double bearing = 0.0;  // relative to heading
  double range = 0.0;
  friend bool operator==(const RangeReading&, const RangeReading&) = default;
};

struct Detection {
  std::string object_id;
  std::string label;
  double bearing = 0.0;  // relative to heading
  double range = 0.0;    // to the object center
  friend bool operator==(const Detection&, const Detection&) = default;
};

struct Observation {
  Pose pose;
  std::vector<RangeReading> range_scan;
  std::vector<Detection> detections;
  int step_index = 0;
  bool collided_last_step = false;
  friend bool operator==(const Observation&, const Observation&) = default;
};

struct TrajectorySample {
  double t = 0.0;
  Pose pose;
  friend bool operator==(const TrajectorySample&, const TrajectorySample&) = default;
};

struct CollisionEvent {
  double t = 0.0;
  WorldPoint contact_point;
  double blocked_displacement = 0.0;
  friend bool operator==(const CollisionEvent&, const CollisionEvent&) = default;
};

enum class DoneReason { kNone, kStopped, kCollision, kStepLimit };
std::string_view done_reason_name(DoneReason r);
std::optional<DoneReason> parse_done_reason(std::string_view name);

struct Trajectory {
  std::string episode_id;
  SimMode mode = SimMode::kStrict;
  std::vector<TrajectorySample> samples;
  std::vector<Action> actions;
  // Blocked displacement accumulated by each executed action.
  std::vector<double> step_blocked;
  std::vector<CollisionEvent> collision_events;
  bool stopped = false;
  Pose stop_pose;  // final pose once the episode is done
  DoneReason done_reason = DoneReason::kNone;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct StepResult {
  Observation observation;
  bool done = false;
  DoneReason done_reason = DoneReason::kNone;
  bool collided = false;
  double blocked_displacement = 0.0;
};

}  // namespace navbench
