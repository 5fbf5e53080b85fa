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

#include "sim/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <variant>

#include "geometry/ray_cast.hpp"

namespace navbench {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Distance along the unit ray (o, u) at which it first enters the footprint.
double ray_entry(const Footprint& fp, WorldPoint o, WorldPoint u) {
  if (const auto* r = std::get_if<Rect>(&fp)) {
    double t0 = 0.0, t1 = kInf;
    const double orig[2] = {o.x, o.y}, dir[2] = {u.x, u.y};
    const double lo[2] = {r->min.x, r->min.y}, hi[2] = {r->max.x, r->max.y};
    for (int k = 0; k < 2; ++k) {
      if (std::abs(dir[k]) < 1e-15) {
        if (orig[k] < lo[k] || orig[k] > hi[k]) return kInf;
        continue;
      }
      double a = (lo[k] - orig[k]) / dir[k];
      double b = (hi[k] - orig[k]) / dir[k];
      if (a > b) std::swap(a, b);
      t0 = std::max(t0, a);
      t1 = std::min(t1, b);
    }
    return t0 <= t1 ? t0 : kInf;
  }
  const auto& d = std::get<Disc>(fp);
  const WorldPoint m = o - d.center;
  const double b = dot(m, u);
  const double c = dot(m, m) - d.radius * d.radius;
  if (c <= 0.0) return 0.0;
  const double disc = b * b - c;
  if (disc < 0.0) return kInf;
  const double t = -b - std::sqrt(disc);
  return t >= 0.0 ? t : kInf;
}

}  // namespace

std::vector<RangeReading> range_scan(const OccupancyGrid& grid, const Pose& pose, const SensorConfig& cfg) {
  std::vector<RangeReading> out;
  out.reserve(static_cast<std::size_t>(cfg.num_bearings));
  const double step = 2.0 * std::numbers::pi / cfg.num_bearings;
  for (int k = 0; k < cfg.num_bearings; ++k) {
    const double rel = normalize_angle(k * step);
    out.push_back({rel, ray_cast(grid, pose.position(), pose.yaw + rel, cfg.max_range)});
  }
  return out;
}

std::vector<Detection> detect_objects(const SceneContext& ctx, const Pose& pose, const SensorConfig& cfg) {
  const WorldPoint o = pose.position();
  const double res = ctx.raw_grid().resolution();
  const Scene& scene = ctx.scene();
  std::vector<Detection> out;
  for (const auto& obj : scene.objects) {
    const WorldPoint c = footprint_center(obj.footprint);
    const double range = distance(o, c);
    if (range > cfg.max_range) continue;
    const double world_bearing = range > 0.0 ? std::atan2(c.y - o.y, c.x - o.x) : pose.yaw;
    const WorldPoint u{std::cos(world_bearing), std::sin(world_bearing)};
    double entry = ray_entry(obj.footprint, o, u);
    for (const auto* e : ctx.graph().edges_from(obj.object_id)) {
      if (e->relation != Relation::kOn) continue;
      if (const auto* support = scene.find_object(e->object)) {
        entry = std::min(entry, ray_entry(support->footprint, o, u));
      }
    }
    if (!std::isfinite(entry)) entry = range;
    const double hit = ray_cast(ctx.raw_grid(), o, world_bearing, cfg.max_range);
    if (hit + res + 1e-9 < entry) continue;
    out.push_back({obj.object_id, obj.label, normalize_angle(world_bearing - pose.yaw), range});
  }
  return out;
}

Observation observe(const SceneContext& ctx, const Pose& pose, const SensorConfig& cfg, int step_index,
                    bool collided_last_step) {
  Observation obs;
  obs.pose = pose;
  obs.range_scan = range_scan(ctx.raw_grid(), pose, cfg);
  obs.detections = detect_objects(ctx, pose, cfg);
  obs.step_index = step_index;
  obs.collided_last_step = collided_last_step;
  return obs;
}

}  // namespace navbench
