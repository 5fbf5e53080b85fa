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

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "common/json_util.hpp"
#include "env/generator.hpp"
#include "env/scene_context.hpp"
#include "tasks/episode.hpp"
#include "tasks/path_sampler.hpp"
#include "tasks/refinement.hpp"

namespace navbench {

inline constexpr const char* kGeneratorVersion = "navbench-0.1.0";
inline constexpr const char* kSplitNames[] = {"train", "val_seen", "val_unseen", "test"};

// Builders for single episodes. Each takes a sampled path; coarse-family
// samples must carry a target object.
Episode make_fine_episode(const SceneContext& ctx, const PathSample& sample, std::string episode_id,
                          double success_thresh = kDefaultSuccessThreshold);
Episode make_coarse_family_episode(const SceneContext& ctx, const PathSample& sample, TaskType type,
                                   std::string episode_id, double success_thresh = kDefaultSuccessThreshold);
GoalSnapshot capture_goal_snapshot(const SceneContext& ctx, const PlannedPath& path);

// Joins 2-3 single-goal episodes from one scene into a sequential task. Legs
// after the first are re-planned from the previous goal. Throws
// kUnreachable when a leg has no path.
Episode chain_long_horizon(const SceneContext& ctx, const std::vector<Episode>& legs, std::string episode_id);

struct DatasetParams {
  std::uint64_t seed = 0;
  int fine_per_scene = 4;
  int coarse_per_scene = 4;  // trajectories shared by coarse, visual_ref and dialogue
  int long_horizon_per_scene = 2;
  std::vector<TaskType> tasks{std::begin(kAllTaskTypes), std::end(kAllTaskTypes)};
  PathConstraints constraints;
  double success_thresh = kDefaultSuccessThreshold;
  std::array<int, 3> split_ratios{177, 33, 53};  // train : val_unseen : test
  double val_seen_fraction = 0.2;
  int threads = 1;
  RefinementClients clients;

  void validate() const;
};

// Scene counts for (train, val_unseen, test); train takes the remainder and
// every split gets at least one scene. Needs n >= 3.
std::array<int, 3> split_scene_counts(int n, const std::array<int, 3>& ratios);

struct SplitInfo {
  std::string name;
  std::vector<std::string> scene_ids;
  std::vector<std::string> episode_ids;
};

struct Dataset {
  std::vector<SplitInfo> splits;                         // in kSplitNames order
  std::map<std::string, std::vector<Episode>> episodes;  // by split name
  Json manifest;
  std::vector<std::string> refinement_log;
  // Families a scene could not host, "<family id>: <reason>". Also in the manifest.
  std::vector<std::string> skipped;
};

// Deterministic in params.seed and the scenes; independent of thread count.
Dataset build_dataset(const std::vector<SceneContextPtr>& scenes, const DatasetParams& params);

// <dir>/manifest.json, <dir>/<split>.jsonl, <dir>/scenes/<scene_id>.json
void write_dataset(const Dataset& dataset, const std::vector<SceneContextPtr>& scenes, const std::string& dir);

struct LoadedDataset {
  Json manifest;
  std::map<std::string, SceneContextPtr> scenes;
  std::vector<Episode> episodes;  // all splits, sorted by episode_id
  std::map<std::string, std::string> split_of;  // episode_id -> split

  const Episode* find(const std::string& episode_id) const;
  SceneContextPtr scene_for(const Episode& e) const;
};

LoadedDataset load_dataset(const std::string& dir);

// Reviewer CSV with header `episode_id,score` (optional third column
// `verified`). Returns the number of rows applied; unknown ids are errors.
int import_reviews(const std::string& dataset_dir, const std::string& csv_path);

// Scene directory: <dir>/<scene_id>.json plus <dir>/index.json recording
// the seed, agent body and navigation params used.
void write_scene_dir(const std::vector<Scene>& scenes, const GeneratorParams& params, std::uint64_t seed,
                     const std::string& dir);
// Without index.json every *.json file in dir is read with default agent
// and navigation params. Sorted by scene_id.
std::vector<SceneContextPtr> load_scene_dir(const std::string& dir);

Json agent_to_json(const AgentBody& a);
AgentBody agent_from_json(const JsonReader& j);

}  // namespace navbench
