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

#include "service/offline.hpp"

#include <algorithm>
#include <filesystem>
#include <map>

#include "common/error.hpp"
#include "service/runner.hpp"
#include "sim/trajectory_io.hpp"

namespace fs = std::filesystem;

namespace navbench {

Trajectory trajectory_from_csv(const std::string& text, const std::string& episode_id, SimMode mode,
                               const std::string& source) {
  Trajectory t;
  t.episode_id = episode_id;
  t.mode = mode;
  t.samples = samples_from_csv(text, source);
  if (t.samples.empty()) throw Error(ErrorCode::kParseError, source + ": no samples");
  t.stopped = true;
  t.done_reason = DoneReason::kStopped;
  t.stop_pose = t.samples.back().pose;
  return t;
}

namespace {

Trajectory load_one(const fs::path& p, SimMode csv_mode) {
  if (p.extension() == ".csv") {
    return trajectory_from_csv(read_text_file(p.string()), p.stem().string(), csv_mode, p.string());
  }
  return load_trajectory_json(p.string());
}

}  // namespace

std::vector<Trajectory> load_trajectories(const std::string& path, SimMode csv_mode) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw Error(ErrorCode::kIoError, path + ": no such file or directory");
  std::vector<Trajectory> out;
  if (!fs::is_directory(path, ec)) {
    out.push_back(load_one(path, csv_mode));
    return out;
  }
  std::map<std::string, fs::path> json, csv;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    const std::string name = p.filename().string();
    if (name.size() > 12 && name.ends_with(".report.json")) continue;
    if (name.size() > 11 && name.ends_with(".report.csv")) continue;
    if (p.extension() == ".json") json[p.stem().string()] = p;
    if (p.extension() == ".csv") csv[p.stem().string()] = p;
  }
  for (const auto& [stem, p] : json) out.push_back(load_one(p, csv_mode));
  for (const auto& [stem, p] : csv) {
    if (!json.count(stem)) out.push_back(load_one(p, csv_mode));
  }
  if (out.empty()) throw Error(ErrorCode::kIoError, path + ": no trajectory files");
  std::sort(out.begin(), out.end(), [](const Trajectory& a, const Trajectory& b) { return a.episode_id < b.episode_id; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].episode_id == out[i - 1].episode_id) {
      throw Error(ErrorCode::kInvalidArgument, path + ": two trajectories for episode '" + out[i].episode_id + "'");
    }
  }
  return out;
}

MetricsReport evaluate_trajectories(const LoadedDataset& dataset, const std::vector<Trajectory>& trajectories,
                                    const ReportConfig& config) {
  if (trajectories.empty()) throw Error(ErrorCode::kInvalidArgument, "no trajectories to evaluate");
  std::vector<EpisodeResult> results;
  for (const Trajectory& t : trajectories) {
    const Episode* e = dataset.find(t.episode_id);
    if (!e) throw Error(ErrorCode::kUnknownEpisode, "no episode '" + t.episode_id + "' in the dataset");
    results.push_back(score_episode(*e, t, *dataset.scene_for(*e)));
  }
  return aggregate(std::move(results), config);
}

HumanSessionFiles human_session_files(const std::string& out_dir, const std::string& episode_id) {
  const fs::path d(out_dir);
  return {(d / (episode_id + ".csv")).string(), (d / (episode_id + ".json")).string(),
          (d / (episode_id + ".report.json")).string(), (d / (episode_id + ".report.csv")).string()};
}

SessionOptions human_session_options(const LoadedDataset& dataset, const std::string& episode_id,
                                     const std::string& out_dir, const SimConfig& sim) {
  const Episode* e = dataset.find(episode_id);
  if (!e) throw Error(ErrorCode::kUnknownEpisode, "no episode '" + episode_id + "' in the dataset");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, out_dir + ": " + ec.message());
  const double res = dataset.scene_for(*e)->nav_params().resolution;
  SessionOptions o;
  o.sim = sim;
  o.only_episode = episode_id;
  const HumanSessionFiles files = human_session_files(out_dir, episode_id);
  o.on_done = [files, res, sim](const Episode& ep, const Trajectory& traj, const EpisodeResult& result) {
    SimConfig cfg = sim;
    cfg.success_thresh = ep.success_thresh;
    cfg.mode = traj.mode;
    const MetricsReport report = aggregate({result}, report_config(cfg, "human", res));
    write_text_file(files.csv, trajectory_to_csv(traj));
    write_text_file(files.trajectory, trajectory_to_json(traj).dump(2) + "\n");
    save_report(report, files.report);
    write_text_file(files.report_csv, report_to_csv(report));
  };
  return o;
}

}  // namespace navbench
