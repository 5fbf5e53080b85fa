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

#include "tasks/path_sampler.hpp"

#include <cmath>
#include <vector>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace navbench {
namespace {

std::vector<Cell> free_cells(const OccupancyGrid& grid) {
  std::vector<Cell> out;
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) {
      if (grid.free({r, c})) out.push_back({r, c});
    }
  }
  return out;
}

Cell pick(Rng& rng, const std::vector<Cell>& cells) {
  return cells[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(cells.size()) - 1))];
}

// Objects worth naming as a destination: anything the agent can see from
// the floor. Ceiling fixtures are skipped.
bool targetable(const ObjectSpec& o, const AgentBody& agent) { return o.base_height < agent.height; }

std::optional<PathSample> try_pair(const SceneContext& ctx, const PathConstraints& k, WorldPoint start,
                                   WorldPoint goal) {
  if (distance(start, goal) > k.max_geodesic) return std::nullopt;
  auto path = astar(ctx.nav_grid(), start, goal);
  if (!path || path->length < k.min_geodesic || path->length > k.max_geodesic) return std::nullopt;
  PathSample s;
  s.start = make_pose(start, initial_heading(*path));
  s.goal = goal;
  s.path = std::move(*path);
  return s;
}

}  // namespace

void PathConstraints::validate() const {
  if (!(min_geodesic >= 0.0) || !(max_geodesic >= min_geodesic)) {
    throw Error(ErrorCode::kInvalidArgument, "geodesic constraints need 0 <= min <= max");
  }
  if (max_tries < 1) throw Error(ErrorCode::kInvalidArgument, "max_tries must be >= 1");
}

double initial_heading(const PlannedPath& path) {
  for (std::size_t i = 1; i < path.waypoints.size(); ++i) {
    const WorldPoint d = path.waypoints[i] - path.waypoints[0];
    if (norm(d) > 1e-9) return normalize_angle(std::atan2(d.y, d.x));
  }
  return 0.0;
}

PathSample sample_path(const SceneContext& ctx, const PathConstraints& constraints, std::uint64_t seed) {
  constraints.validate();
  const OccupancyGrid& grid = ctx.nav_grid();
  const auto cells = free_cells(grid);
  if (cells.empty()) throw Error(ErrorCode::kSamplingExhausted, "scene '" + ctx.scene().scene_id + "' has no free space");
  Rng rng(seed);
  for (int attempt = 0; attempt < constraints.max_tries; ++attempt) {
    const WorldPoint start = grid.cell_center(pick(rng, cells));
    const WorldPoint goal = grid.cell_center(pick(rng, cells));
    if (auto s = try_pair(ctx, constraints, start, goal)) return std::move(*s);
  }
  throw Error(ErrorCode::kSamplingExhausted, "scene '" + ctx.scene().scene_id + "': no start/goal pair within " +
                                                 std::to_string(constraints.max_tries) + " draws");
}

PathSample sample_object_path(const SceneContext& ctx, const PathConstraints& constraints, std::uint64_t seed,
                              std::optional<WorldPoint> fixed_start) {
  constraints.validate();
  const OccupancyGrid& grid = ctx.nav_grid();
  const auto cells = free_cells(grid);
  std::vector<const ObjectSpec*> targets;
  for (const auto& o : ctx.scene().objects) {
    if (targetable(o, ctx.agent())) targets.push_back(&o);
  }
  if (fixed_start && !targets.empty()) {
    // Drop targets that cannot satisfy the band from this start, so a dead end
    // fails fast instead of burning max_tries searches. One cell of slack
    // covers the difference between field and exact endpoint costs.
    const DistanceField field(grid, *fixed_start);
    const double slack = 2.0 * grid.resolution();
    std::erase_if(targets, [&](const ObjectSpec* o) {
      const double d = field.at(nearest_free_point(grid, footprint_center(o->footprint)));
      return !(d >= constraints.min_geodesic - slack && d <= constraints.max_geodesic + slack);
    });
  }
  if (cells.empty() || targets.empty()) {
    throw Error(ErrorCode::kSamplingExhausted, "scene '" + ctx.scene().scene_id + "' has no object goals");
  }
  Rng rng(seed);
  for (int attempt = 0; attempt < constraints.max_tries; ++attempt) {
    const ObjectSpec* target =
        targets[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(targets.size()) - 1))];
    const WorldPoint goal = nearest_free_point(grid, footprint_center(target->footprint));
    const WorldPoint start = fixed_start ? *fixed_start : grid.cell_center(pick(rng, cells));
    if (auto s = try_pair(ctx, constraints, start, goal)) {
      s->target_object_id = target->object_id;
      return std::move(*s);
    }
  }
  throw Error(ErrorCode::kSamplingExhausted, "scene '" + ctx.scene().scene_id + "': no object goal within " +
                                                 std::to_string(constraints.max_tries) + " draws");
}

}  // namespace navbench
