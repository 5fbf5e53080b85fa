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

#include "sim/simulator.hpp"

#include <cmath>

#include "common/error.hpp"
#include "geometry/occupancy_grid.hpp"
#include "sim/collision.hpp"
#include "sim/sensing.hpp"

namespace navbench {
namespace {

constexpr double kLimitSlack = 1e-9;

}  // namespace

Simulator::Simulator(SceneContextPtr ctx, SimConfig config, SensorConfig sensor)
    : ctx_(std::move(ctx)), config_(config), sensor_(sensor) {
  if (!ctx_) throw Error(ErrorCode::kInvalidArgument, "simulator needs a scene context");
  config_.validate();
}

Observation Simulator::reset(const Episode& episode) {
  if (episode.scene_id != ctx_->scene().scene_id) {
    throw Error(ErrorCode::kInvalidEpisode, "episode '" + episode.episode_id + "' belongs to scene '" +
                                                episode.scene_id + "', not '" + ctx_->scene().scene_id + "'");
  }
  const WorldPoint start = episode.start.position();
  if (!is_finite(start) || !std::isfinite(episode.start.yaw) || !ctx_->nav_grid().cell_of(start)) {
    throw Error(ErrorCode::kInvalidEpisode, "episode '" + episode.episode_id + "' start pose is off-grid");
  }
  if (ctx_->nav_grid().occupied_at(start)) {
    throw Error(ErrorCode::kInvalidEpisode, "episode '" + episode.episode_id + "' start pose is not free");
  }
  episode_ = episode;
  pose_ = make_pose(start, episode.start.yaw);
  tick_ = 0;
  steps_ = 0;
  done_ = false;
  collided_last_ = false;
  trajectory_ = Trajectory{};
  trajectory_.episode_id = episode.episode_id;
  trajectory_.mode = config_.mode;
  trajectory_.stop_pose = pose_;
  record_sample();
  return sense();
}

Observation Simulator::sense() const { return observe(*ctx_, pose_, sensor_, steps_, collided_last_); }

void Simulator::record_sample() { trajectory_.samples.push_back({time(), pose_}); }

void Simulator::finish(DoneReason reason) {
  done_ = true;
  trajectory_.done_reason = reason;
  trajectory_.stop_pose = pose_;
  trajectory_.stopped = reason == DoneReason::kStopped;
}

ContinuousAction Simulator::primitive_command(Primitive p) const {
  const AgentBody& agent = ctx_->agent();
  const double h = config_.substep;
  switch (p) {
    case Primitive::kForward: {
      const double d = config_.primitives.forward_distance;
      const double n = std::max(1.0, std::ceil(d / (agent.max_linear_speed * h) - 1e-9));
      return {d / (n * h), 0.0, n * h};
    }
    case Primitive::kTurnLeft:
    case Primitive::kTurnRight: {
      const double a = config_.primitives.turn_angle;
      const double n = std::max(1.0, std::ceil(a / (agent.max_angular_speed * h) - 1e-9));
      const double omega = a / (n * h);
      return {0.0, p == Primitive::kTurnLeft ? omega : -omega, n * h};
    }
    case Primitive::kStop:
      break;
  }
  return {0.0, 0.0, 0.0};
}

void Simulator::validate_command(const ContinuousAction& cmd) const {
  const AgentBody& agent = ctx_->agent();
  if (!std::isfinite(cmd.v) || !std::isfinite(cmd.omega) || !std::isfinite(cmd.dt)) {
    throw Error(ErrorCode::kInvalidAction, "continuous command must be finite");
  }
  if (std::abs(cmd.v) > agent.max_linear_speed + kLimitSlack) {
    throw Error(ErrorCode::kInvalidAction, "|v| exceeds max_linear_speed");
  }
  if (std::abs(cmd.omega) > agent.max_angular_speed + kLimitSlack) {
    throw Error(ErrorCode::kInvalidAction, "|omega| exceeds max_angular_speed");
  }
  if (!(cmd.dt > 0.0) || cmd.dt > 1.0 + kLimitSlack) {
    throw Error(ErrorCode::kInvalidAction, "dt must lie in (0, 1] s");
  }
}

// Durations are quantized to whole substeps so samples land exactly on the
// substep cadence.
Simulator::MotionOutcome Simulator::integrate(const ContinuousAction& cmd) {
  const double h = config_.substep;
  const auto ticks = std::max<std::int64_t>(1, std::llround(cmd.dt / h));
  MotionOutcome out;
  for (std::int64_t k = 0; k < ticks; ++k) {
    const double yaw_mid = pose_.yaw + 0.5 * cmd.omega * h;
    const WorldPoint disp{cmd.v * h * std::cos(yaw_mid), cmd.v * h * std::sin(yaw_mid)};
    const MoveResult moved =
        resolve_move(ctx_->raw_grid(), pose_.position(), disp, ctx_->agent().radius, config_.allow_sliding);
    out.blocked += moved.blocked;
    if (moved.contact && !out.contact) out.contact = moved.contact;
    pose_ = make_pose(moved.position, pose_.yaw + cmd.omega * h);
    ++tick_;
    record_sample();
  }
  return out;
}

StepResult Simulator::step(const Action& action) {
  if (!episode_) throw Error(ErrorCode::kEpisodeFinished, "no episode has been reset");
  if (done_) throw Error(ErrorCode::kEpisodeFinished, "episode '" + episode_->episode_id + "' is finished");

  StepResult result;
  MotionOutcome motion;
  bool stop = false;

  if (const auto* d = std::get_if<DiscreteAction>(&action)) {
    if (d->primitive == Primitive::kStop) {
      stop = true;
    } else {
      motion = integrate(primitive_command(d->primitive));
    }
  } else if (const auto* c = std::get_if<ContinuousAction>(&action)) {
    validate_command(*c);
    motion = integrate(*c);
  } else if (const auto* hop = std::get_if<WaypointHop>(&action)) {
    if (config_.mode != SimMode::kTelHop) {
      throw Error(ErrorCode::kUnsupportedAction, "waypoint hops are only available in telhop mode");
    }
    if (!is_finite(hop->target)) throw Error(ErrorCode::kInvalidAction, "hop target must be finite");
    // Targets inside (inflated) obstacles are moved to the nearest free
    // cell; the relocation is not a collision.
    WorldPoint target = hop->target;
    if (ctx_->nav_grid().occupied_at(target)) target = nearest_free_point(ctx_->nav_grid(), target);
    const WorldPoint delta = target - pose_.position();
    const double yaw = norm(delta) > 1e-9 ? std::atan2(delta.y, delta.x) : pose_.yaw;
    pose_ = make_pose(target, yaw);
    ++tick_;
    record_sample();
  } else {
    throw Error(ErrorCode::kUnsupportedAction, "oracle queries are answered by the session, not the simulator");
  }

  trajectory_.actions.push_back(action);
  trajectory_.step_blocked.push_back(motion.blocked);
  ++steps_;

  result.blocked_displacement = motion.blocked;
  result.collided = motion.blocked >= config_.collision_thresh;
  collided_last_ = result.collided;
  if (result.collided) {
    trajectory_.collision_events.push_back(
        {time(), motion.contact.value_or(pose_.position()), motion.blocked});
  }

  if (stop) {
    finish(DoneReason::kStopped);
  } else if (result.collided && config_.mode == SimMode::kStrict) {
    finish(DoneReason::kCollision);
  } else if (steps_ >= config_.max_steps) {
    finish(DoneReason::kStepLimit);
  }
  result.done = done_;
  result.done_reason = trajectory_.done_reason;
  result.observation = sense();
  return result;
}

}  // namespace navbench
