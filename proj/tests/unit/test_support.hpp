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

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "common/rng.hpp"
#include "env/generator.hpp"
#include "env/scene.hpp"
#include "env/scene_context.hpp"
#include "geometry/occupancy_grid.hpp"
#include "geometry/planner.hpp"
#include "tasks/episode.hpp"

namespace navbench::testing {

inline OccupancyGrid random_grid(Rng& rng, int width, int height, double density, double resolution = 1.0) {
  OccupancyGrid g(resolution, {0.0, 0.0}, width, height);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) g.set_occupied({r, c}, rng.uniform() < density);
  }
  return g;
}

inline std::vector<Cell> free_cells(const OccupancyGrid& g) {
  std::vector<Cell> out;
  for (int r = 0; r < g.height(); ++r) {
    for (int c = 0; c < g.width(); ++c) {
      if (g.free({r, c})) out.push_back({r, c});
    }
  }
  return out;
}

// One empty room covering [0, w] x [0, h].
inline Scene box_scene(double w, double h, const std::string& id = "box") {
  Scene s;
  s.scene_id = id;
  s.bounds = {{0.0, 0.0}, {w, h}};
  s.rooms.push_back({"room_0", "living room", s.bounds, {}});
  return s;
}

inline ObjectSpec make_object(const std::string& id, const std::string& label, Footprint fp, double base,
                              double top, const std::string& room = "room_0") {
  ObjectSpec o;
  o.object_id = id;
  o.label = label;
  o.footprint = fp;
  o.base_height = base;
  o.top_height = top;
  o.room_id = room;
  return o;
}

// Fine episode whose reference path is planned on the navigation grid.
inline Episode simple_episode(const SceneContext& ctx, Pose start, WorldPoint goal,
                              const std::string& id = "ep_000") {
  Episode e;
  e.episode_id = id;
  e.scene_id = ctx.scene().scene_id;
  e.task_type = TaskType::kFine;
  e.instructions.fine = "Walk forward about 2 meters. Stop near the wall.";
  e.start = start;
  e.goals.push_back({goal, std::nullopt});
  if (auto p = astar(ctx.nav_grid(), {start.x, start.y}, goal)) {
    e.reference_path = *p;
  } else {
    e.reference_path.waypoints = {{start.x, start.y}, goal};
    e.reference_path.length = distance(WorldPoint{start.x, start.y}, goal);
  }
  return e;
}

inline std::vector<SceneContextPtr> generated_scenes(int count, std::uint64_t seed) {
  std::vector<SceneContextPtr> out;
  for (const Scene& s : generate_scenes(GeneratorParams{}, count, seed)) out.push_back(make_scene_context(s));
  return out;
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "navbench-test-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) std::abort();
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& rel = "") const { return rel.empty() ? path_.string() : (path_ / rel).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace navbench::testing
