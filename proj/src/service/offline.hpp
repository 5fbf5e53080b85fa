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

#include <string>
#include <vector>

#include "eval/scoring.hpp"
#include "service/session.hpp"
#include "tasks/dataset.hpp"

namespace navbench {

// A `t,x,y,yaw` CSV carries no actions or collision events: the trajectory
// is taken as explicitly stopped at its last sample, with zero actions.
Trajectory trajectory_from_csv(const std::string& text, const std::string& episode_id, SimMode mode,
                               const std::string& source);

// `path` is a trajectory JSON file, a CSV named <episode_id>.csv, or a
// directory of those. Within a directory JSON wins over CSV for the same
// episode. Sorted by episode_id.
std::vector<Trajectory> load_trajectories(const std::string& path, SimMode csv_mode = SimMode::kStrict);

// Throws kUnknownEpisode for ids missing from the dataset.
MetricsReport evaluate_trajectories(const LoadedDataset& dataset, const std::vector<Trajectory>& trajectories,
                                    const ReportConfig& config);

struct HumanSessionFiles {
  std::string csv;          // <dir>/<id>.csv
  std::string trajectory;   // <dir>/<id>.json
  std::string report;       // <dir>/<id>.report.json
  std::string report_csv;   // <dir>/<id>.report.csv
};

HumanSessionFiles human_session_files(const std::string& out_dir, const std::string& episode_id);

// Session options that restrict the connection to one episode and write the
// 50 ms CSV, the trajectory JSON and the scored report when it finishes.
SessionOptions human_session_options(const LoadedDataset& dataset, const std::string& episode_id,
                                     const std::string& out_dir, const SimConfig& sim);

}  // namespace navbench
