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
#include "env/scene_context.hpp"
#include "sim/types.hpp"
#include "tasks/episode.hpp"

namespace navbench {

struct EpisodeMetrics {
  double TL = 0.0;
  double NE = 0.0;
  int SR = 0;
  int OSR = 0;
  double SPL = 0.0;
  double nDTW = 0.0;
  double CR = 0.0;
  std::optional<std::vector<bool>> SR_n;  // long-horizon per-goal reach flags

  friend bool operator==(const EpisodeMetrics&, const EpisodeMetrics&) = default;
};

struct EpisodeResult {
  std::string episode_id;
  TaskType task_type = TaskType::kFine;
  SimMode mode = SimMode::kStrict;
  DoneReason done_reason = DoneReason::kNone;
  std::vector<bool> per_goal_reached;
  Pose stop_pose;
  int num_actions = 0;
  int num_collisions = 0;
  double reference_length = 0.0;  // L
  double path_length = 0.0;       // P, equal to TL
  EpisodeMetrics metrics;

  friend bool operator==(const EpisodeResult&, const EpisodeResult&) = default;
};

// Throws kMismatchedEpisode when the trajectory belongs to another episode.
EpisodeResult score_episode(const Episode& episode, const Trajectory& trajectory, const SceneContext& ctx);

struct LongHorizonScores {
  int N = 0;
  std::vector<int> reached;  // reached[n-1]: episodes reaching goal n (and all before it)
  std::vector<int> eligible;  // episodes with at least n goals
  int all_success = 0;        // reached every goal and stopped successfully
  std::optional<double> SR_1;
  std::vector<std::optional<double>> SR_n;  // index 0 is SR_2
  std::optional<double> SR_All;

  friend bool operator==(const LongHorizonScores&, const LongHorizonScores&) = default;
};

// Percentages. SR_n for n > 1 is conditional on reaching goal n-1 and is
// null when nobody did.
LongHorizonScores score_long_horizon(const std::vector<EpisodeResult>& results);

struct ReportConfig {
  std::string mode = "strict";
  double success_thresh = kDefaultSuccessThreshold;
  double collision_thresh = 0.10;
  int max_steps = 200;
  double oracle_stop_thresh = 1.5;
  double dtw_spacing = 0.25;
  double resolution = 0.05;
  std::string agent;

  friend bool operator==(const ReportConfig&, const ReportConfig&) = default;
};

struct Aggregates {
  int N = 0;
  double TL = 0.0;
  double NE = 0.0;
  double SR = 0.0;   // percent, 2 decimals
  double OSR = 0.0;  // percent, 2 decimals
  double SPL = 0.0;
  double nDTW = 0.0;
  double CR = 0.0;
  std::optional<LongHorizonScores> long_horizon;

  friend bool operator==(const Aggregates&, const Aggregates&) = default;
};

struct MetricsReport {
  ReportConfig config;
  std::vector<EpisodeResult> per_episode;  // sorted by episode_id
  Aggregates aggregates;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

double round2(double v);

// Sorts by episode_id and averages. Needs at least one result.
MetricsReport aggregate(std::vector<EpisodeResult> results, ReportConfig config);

Json episode_result_to_json(const EpisodeResult& r);
EpisodeResult episode_result_from_json(const JsonReader& j);
Json metrics_to_json(const EpisodeMetrics& m);
Json report_to_json(const MetricsReport& r);
MetricsReport report_from_json(const JsonReader& j);
std::string report_to_csv(const MetricsReport& r);

void save_report(const MetricsReport& r, const std::string& json_path);
MetricsReport load_report(const std::string& json_path);

}  // namespace navbench
