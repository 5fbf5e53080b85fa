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

#include "sim/types.hpp"

#include "common/error.hpp"

namespace navbench {

bool is_stop(const Action& a) {
  const auto* d = std::get_if<DiscreteAction>(&a);
  return d && d->primitive == Primitive::kStop;
}

std::string_view primitive_name(Primitive p) {
  switch (p) {
    case Primitive::kForward: return "FORWARD";
    case Primitive::kTurnLeft: return "TURN_LEFT";
    case Primitive::kTurnRight: return "TURN_RIGHT";
    case Primitive::kStop: return "STOP";
  }
  return "STOP";
}

std::optional<Primitive> parse_primitive(std::string_view name) {
  for (Primitive p : {Primitive::kForward, Primitive::kTurnLeft, Primitive::kTurnRight, Primitive::kStop}) {
    if (primitive_name(p) == name) return p;
  }
  return std::nullopt;
}

std::string_view sim_mode_name(SimMode m) { return m == SimMode::kStrict ? "strict" : "telhop"; }

std::optional<SimMode> parse_sim_mode(std::string_view name) {
  if (name == "strict") return SimMode::kStrict;
  if (name == "telhop") return SimMode::kTelHop;
  return std::nullopt;
}

std::string_view done_reason_name(DoneReason r) {
  switch (r) {
    case DoneReason::kNone: return "none";
    case DoneReason::kStopped: return "stopped";
    case DoneReason::kCollision: return "collision";
    case DoneReason::kStepLimit: return "step_limit";
  }
  return "none";
}

std::optional<DoneReason> parse_done_reason(std::string_view name) {
  for (DoneReason r : {DoneReason::kNone, DoneReason::kStopped, DoneReason::kCollision, DoneReason::kStepLimit}) {
    if (done_reason_name(r) == name) return r;
  }
  return std::nullopt;
}

void SimConfig::validate() const {
  if (!(collision_thresh > 0.0)) throw Error(ErrorCode::kInvalidArgument, "collision_thresh must be > 0");
  if (max_steps < 1) throw Error(ErrorCode::kInvalidArgument, "max_steps must be >= 1");
  if (!(substep > 0.0) || substep > 1.0) throw Error(ErrorCode::kInvalidArgument, "substep must lie in (0, 1]");
  if (!(success_thresh > 0.0)) throw Error(ErrorCode::kInvalidArgument, "success_thresh must be > 0");
  if (!(primitives.forward_distance > 0.0) || !(primitives.turn_angle > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "primitive magnitudes must be > 0");
  }
}

}  // namespace navbench
