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

#include "service/agents.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "common/rng.hpp"
#include "geometry/planner.hpp"
#include "sim/collision.hpp"

namespace navbench {
namespace {

constexpr double kReachedTol = 1e-6;
constexpr double kAlignedTol = 1e-6;
constexpr int kMaxTicksPerAction = 20;  // 1 s at the default substep

double segment_deviation(WorldPoint p, WorldPoint a, WorldPoint b) {
  const WorldPoint ab = b - a;
  const double len2 = dot(ab, ab);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return distance(p, a + t * ab);
}

// Tracks the simplified reference path: rotate in place toward the next
// vertex, drive straight to it in chunks of at most one second, STOP at the
// end. In Tel-Hop mode it hops vertex to vertex instead.
class OracleFollower : public Agent {
 public:
  void reset(const Episode& episode, SceneContextPtr ctx, const SimConfig& config, std::uint64_t) override {
    ctx_ = std::move(ctx);
    config_ = config;
    plan_ = drivable_simplification(*ctx_, episode.reference_path.waypoints);
    next_ = 1;
  }

  Action act(const Observation& obs) override {
    const WorldPoint here = obs.pose.position();
    while (next_ < plan_.size() && distance(here, plan_[next_]) < kReachedTol) ++next_;
    if (next_ >= plan_.size()) return stop_action();
    const WorldPoint target = plan_[next_];
    if (config_.mode == SimMode::kTelHop) return WaypointHop{target};

    const double h = config_.substep;
    const AgentBody& body = ctx_->agent();
    const WorldPoint d = target - here;
    const double err = normalize_angle(std::atan2(d.y, d.x) - obs.pose.yaw);
    if (std::abs(err) > kAlignedTol) {
      const double total = std::max(1.0, std::ceil(std::abs(err) / (body.max_angular_speed * h) - 1e-9));
      const double n = std::min<double>(total, kMaxTicksPerAction);
      return ContinuousAction{0.0, err / (total * h), n * h};
    }
    const double dist = norm(d);
    const double total = std::max(1.0, std::ceil(dist / (body.max_linear_speed * h) - 1e-9));
    const double n = std::min<double>(total, kMaxTicksPerAction);
    return ContinuousAction{dist / (total * h), 0.0, n * h};
  }

 private:
  SceneContextPtr ctx_;
  SimConfig config_;
  std::vector<WorldPoint> plan_;
  std::size_t next_ = 1;
};

class RandomAgent : public Agent {
 public:
  void reset(const Episode&, SceneContextPtr, const SimConfig&, std::uint64_t seed) override { rng_.emplace(seed); }

  Action act(const Observation&) override {
    if (rng_->bernoulli(0.02)) return stop_action();
    static constexpr Primitive kMoves[] = {Primitive::kForward, Primitive::kTurnLeft, Primitive::kTurnRight};
    return DiscreteAction{kMoves[rng_->uniform_int(0, 2)]};
  }

 private:
  std::optional<Rng> rng_;
};

// Knows where the goal is. Picks the longest free ray within 90 degrees of
// the goal direction, turns toward it with discrete turns, then steps
// forward; stops once the oracle-stop condition holds.
class GreedyAgent : public Agent {
 public:
  void reset(const Episode& episode, SceneContextPtr ctx, const SimConfig& config, std::uint64_t) override {
    ctx_ = std::move(ctx);
    config_ = config;
    goal_ = episode.final_goal().point;
  }

  Action act(const Observation& obs) override {
    const WorldPoint here = obs.pose.position();
    if (oracle_stop_condition(*ctx_, here, goal_)) return stop_action();
    const WorldPoint d = goal_ - here;
    const double goal_bearing = normalize_angle(std::atan2(d.y, d.x) - obs.pose.yaw);
    const double clear = config_.primitives.forward_distance + ctx_->agent().radius + 0.05;
    const RangeReading* best = nullptr;
    for (const auto& r : obs.range_scan) {
      if (r.range < clear) continue;
      if (std::abs(normalize_angle(r.bearing - goal_bearing)) > std::numbers::pi / 2) continue;
      if (!best || r.range > best->range) best = &r;
    }
    if (!best) {
      for (const auto& r : obs.range_scan) {
        if (!best || r.range > best->range) best = &r;
      }
    }
    const double turn = normalize_angle(best->bearing);
    if (std::abs(turn) > 0.5 * config_.primitives.turn_angle) {
      return DiscreteAction{turn > 0.0 ? Primitive::kTurnLeft : Primitive::kTurnRight};
    }
    return DiscreteAction{Primitive::kForward};
  }

 private:
  SceneContextPtr ctx_;
  SimConfig config_;
  WorldPoint goal_;
};

}  // namespace

std::string_view agent_kind_name(AgentKind k) {
  switch (k) {
    case AgentKind::kOracleFollower: return "oracle_follower";
    case AgentKind::kRandom: return "random";
    case AgentKind::kGreedy: return "greedy";
  }
  return "oracle_follower";
}

std::optional<AgentKind> parse_agent_kind(std::string_view name) {
  for (AgentKind k : {AgentKind::kOracleFollower, AgentKind::kRandom, AgentKind::kGreedy}) {
    if (agent_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

std::unique_ptr<Agent> make_agent(AgentKind kind) {
  switch (kind) {
    case AgentKind::kOracleFollower: return std::make_unique<OracleFollower>();
    case AgentKind::kRandom: return std::make_unique<RandomAgent>();
    case AgentKind::kGreedy: return std::make_unique<GreedyAgent>();
  }
  return nullptr;
}

std::vector<WorldPoint> drivable_simplification(const SceneContext& ctx, const std::vector<WorldPoint>& path,
                                                double tolerance) {
  if (path.size() <= 2) return path;
  const double radius = ctx.agent().radius;
  auto drivable = [&](WorldPoint a, WorldPoint b) {
    return segment_clearance(ctx.raw_grid(), a, b, radius + 0.01) > radius + 1e-6;
  };
  std::vector<bool> keep(path.size(), false);
  keep.front() = keep.back() = true;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, path.size() - 1}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    if (hi - lo < 2) continue;
    double worst = -1.0;
    std::size_t idx = lo + 1;
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const double dev = segment_deviation(path[i], path[lo], path[hi]);
      if (dev > worst) {
        worst = dev;
        idx = i;
      }
    }
    if (worst <= tolerance && drivable(path[lo], path[hi])) continue;
    if (worst <= 1e-12) idx = lo + (hi - lo) / 2;
    keep[idx] = true;
    stack.push_back({lo, idx});
    stack.push_back({idx, hi});
  }
  std::vector<WorldPoint> out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (keep[i]) out.push_back(path[i]);
  }
  return out;
}

bool oracle_stop_condition(const SceneContext& ctx, WorldPoint agent, WorldPoint target) {
  const OccupancyGrid& grid = ctx.agent_grid();
  const auto cell = grid.cell_of(agent);
  if (!cell || grid.occupied(*cell)) return false;
  if (distance(agent, target) >= kOracleStopThreshold) return false;  // geodesic >= euclidean
  const auto geo = geodesic_distance(grid, agent, target);
  return geo && *geo < kOracleStopThreshold;
}

}  // namespace navbench
