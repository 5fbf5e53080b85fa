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

#include "eval/scoring.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "common/error.hpp"
#include "eval/metrics.hpp"
#include "geometry/planner.hpp"

namespace navbench {
namespace {

std::vector<WorldPoint> positions(const Trajectory& t) {
  std::vector<WorldPoint> out;
  out.reserve(t.samples.size());
  for (const auto& s : t.samples) out.push_back(s.pose.position());
  return out;
}

std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

Json opt_pct(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> opt_pct_from(const JsonReader& j) {
  if (j.raw().is_null()) return std::nullopt;
  return j.number();
}

}  // namespace

double round2(double v) { return std::round(v * 100.0) / 100.0; }

EpisodeResult score_episode(const Episode& episode, const Trajectory& trajectory, const SceneContext& ctx) {
  if (trajectory.episode_id != episode.episode_id) {
    throw Error(ErrorCode::kMismatchedEpisode, "trajectory for '" + trajectory.episode_id + "' scored against '" +
                                                   episode.episode_id + "'");
  }
  if (episode.scene_id != ctx.scene().scene_id) {
    throw Error(ErrorCode::kMismatchedEpisode, "episode '" + episode.episode_id + "' is not in scene '" +
                                                   ctx.scene().scene_id + "'");
  }
  if (trajectory.samples.empty() || episode.goals.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot score an empty trajectory or goal list");
  }
  const OccupancyGrid& grid = ctx.agent_grid();
  const double thr = episode.success_thresh;
  const auto pts = positions(trajectory);
  const WorldPoint stop = trajectory.stop_pose.position();
  const WorldPoint goal = episode.final_goal().point;

  EpisodeResult r;
  r.episode_id = episode.episode_id;
  r.task_type = episode.task_type;
  r.mode = trajectory.mode;
  r.done_reason = trajectory.done_reason;
  r.stop_pose = trajectory.stop_pose;
  r.num_actions = static_cast<int>(trajectory.actions.size());
  r.num_collisions = static_cast<int>(trajectory.collision_events.size());
  r.reference_length = episode.reference_path.length;
  r.path_length = polyline_length(pts);

  EpisodeMetrics& m = r.metrics;
  m.TL = r.path_length;
  m.NE = distance(stop, goal);
  const bool stop_in_grid = grid.cell_of(stop).has_value();
  const auto geo = stop_in_grid ? geodesic_distance(grid, stop, goal) : std::nullopt;
  const bool within = geo && *geo <= thr;
  const bool open_space = stop_in_grid && grid.free(*grid.cell_of(stop));
  m.OSR = within ? 1 : 0;
  const bool stop_success =
      trajectory.stopped && trajectory.done_reason == DoneReason::kStopped && within && open_space;

  if (episode.task_type == TaskType::kLongHorizon) {
    // Goals must be reached in order: each scan resumes where the previous
    // goal was first reached.
    std::size_t from = 0;
    bool chain = true;
    for (std::size_t g = 0; g < episode.goals.size(); ++g) {
      bool hit = false;
      if (chain) {
        const DistanceField field(grid, episode.goals[g].point);
        for (std::size_t i = from; i < pts.size(); ++i) {
          if (field.at(pts[i]) <= thr) {
            hit = true;
            from = i;
            break;
          }
        }
        const bool last = g + 1 == episode.goals.size();
        if (!hit && last && stop_success) hit = true;
      }
      chain = chain && hit;
      r.per_goal_reached.push_back(hit);
    }
    m.SR = stop_success && chain ? 1 : 0;
    m.SR_n = r.per_goal_reached;
  } else {
    m.SR = stop_success ? 1 : 0;
    r.per_goal_reached = {m.SR == 1};
  }
  m.SPL = spl(m.SR == 1, r.reference_length, r.path_length);
  const auto p = downsample(pts);
  const auto ref = downsample(episode.reference_path.waypoints);
  m.nDTW = ndtw(p, ref, thr);
  m.CR = r.num_actions > 0 ? static_cast<double>(r.num_collisions) / r.num_actions : 0.0;
  return r;
}

LongHorizonScores score_long_horizon(const std::vector<EpisodeResult>& results) {
  LongHorizonScores s;
  std::size_t max_goals = 0;
  for (const auto& r : results) max_goals = std::max(max_goals, r.per_goal_reached.size());
  s.reached.assign(max_goals, 0);
  s.eligible.assign(max_goals, 0);
  for (const auto& r : results) {
    if (r.task_type != TaskType::kLongHorizon) continue;
    ++s.N;
    bool chain = true;
    for (std::size_t g = 0; g < r.per_goal_reached.size(); ++g) {
      ++s.eligible[g];
      chain = chain && r.per_goal_reached[g];
      if (chain) ++s.reached[g];
    }
    if (r.metrics.SR == 1) ++s.all_success;
  }
  if (s.N == 0) return s;
  s.SR_1 = round2(100.0 * s.reached[0] / s.N);
  for (std::size_t n = 1; n < max_goals; ++n) {
    // Conditional on goal n-1 among episodes that have a goal n.
    int denom = 0;
    for (const auto& r : results) {
      if (r.task_type != TaskType::kLongHorizon || r.per_goal_reached.size() <= n) continue;
      if (std::all_of(r.per_goal_reached.begin(), r.per_goal_reached.begin() + static_cast<long>(n), [](bool b) { return b; })) ++denom;
    }
    s.SR_n.push_back(denom > 0 ? std::optional<double>(round2(100.0 * s.reached[n] / denom)) : std::nullopt);
  }
  s.SR_All = round2(100.0 * s.all_success / s.N);
  return s;
}

MetricsReport aggregate(std::vector<EpisodeResult> results, ReportConfig config) {
  if (results.empty()) throw Error(ErrorCode::kInvalidArgument, "no episodes to aggregate");
  std::sort(results.begin(), results.end(),
            [](const EpisodeResult& a, const EpisodeResult& b) { return a.episode_id < b.episode_id; });
  MetricsReport rep;
  rep.config = std::move(config);
  Aggregates& a = rep.aggregates;
  a.N = static_cast<int>(results.size());
  double sr = 0, osr = 0;
  for (const auto& r : results) {
    a.TL += r.metrics.TL;
    a.NE += r.metrics.NE;
    sr += r.metrics.SR;
    osr += r.metrics.OSR;
    a.SPL += r.metrics.SPL;
    a.nDTW += r.metrics.nDTW;
    a.CR += r.metrics.CR;
  }
  const double n = a.N;
  a.TL /= n;
  a.NE /= n;
  a.SR = round2(100.0 * sr / n);
  a.OSR = round2(100.0 * osr / n);
  a.SPL /= n;
  a.nDTW /= n;
  a.CR = 100.0 * a.CR / n;
  if (std::any_of(results.begin(), results.end(), [](const EpisodeResult& r) { return r.task_type == TaskType::kLongHorizon; })) {
    a.long_horizon = score_long_horizon(results);
  }
  rep.per_episode = std::move(results);
  return rep;
}

Json metrics_to_json(const EpisodeMetrics& m) {
  Json j{{"TL", m.TL}, {"NE", m.NE}, {"SR", m.SR}, {"OSR", m.OSR}, {"SPL", m.SPL}, {"nDTW", m.nDTW}, {"CR", m.CR}};
  j["SR_n"] = m.SR_n ? Json(*m.SR_n) : Json(nullptr);
  return j;
}

Json episode_result_to_json(const EpisodeResult& r) {
  Json j{{"episode_id", r.episode_id},
         {"task_type", std::string(task_type_name(r.task_type))},
         {"mode", std::string(sim_mode_name(r.mode))},
         {"done_reason", std::string(done_reason_name(r.done_reason))}};
  const Json metrics = metrics_to_json(r.metrics);
  for (auto& [k, v] : metrics.items()) j[k] = v;
  j["L"] = r.reference_length;
  j["P"] = r.path_length;
  j["num_actions"] = r.num_actions;
  j["num_collisions"] = r.num_collisions;
  j["per_goal_reached"] = r.per_goal_reached;
  j["stop_pose"] = pose_to_json(r.stop_pose);
  return j;
}

EpisodeResult episode_result_from_json(const JsonReader& j) {
  EpisodeResult r;
  r.episode_id = j.field("episode_id").string();
  const auto tt = parse_task_type(j.field("task_type").string());
  if (!tt) j.field("task_type").fail("unknown task type");
  r.task_type = *tt;
  const auto mode = parse_sim_mode(j.field("mode").string());
  if (!mode) j.field("mode").fail("unknown mode");
  r.mode = *mode;
  const auto reason = parse_done_reason(j.field("done_reason").string());
  if (!reason) j.field("done_reason").fail("unknown done reason");
  r.done_reason = *reason;
  EpisodeMetrics& m = r.metrics;
  m.TL = j.field("TL").number();
  m.NE = j.field("NE").number();
  m.SR = static_cast<int>(j.field("SR").integer());
  m.OSR = static_cast<int>(j.field("OSR").integer());
  m.SPL = j.field("SPL").number();
  m.nDTW = j.field("nDTW").number();
  m.CR = j.field("CR").number();
  if (auto s = j.field("SR_n"); !s.raw().is_null()) {
    std::vector<bool> flags;
    for (const auto& b : s.array()) flags.push_back(b.boolean());
    m.SR_n = flags;
  }
  r.reference_length = j.field("L").number();
  r.path_length = j.field("P").number();
  r.num_actions = static_cast<int>(j.field("num_actions").integer());
  r.num_collisions = static_cast<int>(j.field("num_collisions").integer());
  for (const auto& b : j.field("per_goal_reached").array()) r.per_goal_reached.push_back(b.boolean());
  r.stop_pose = pose_from_json(j.field("stop_pose"));
  return r;
}

Json report_to_json(const MetricsReport& r) {
  const ReportConfig& c = r.config;
  Json config{{"mode", c.mode},
              {"success_thresh", c.success_thresh},
              {"collision_thresh", c.collision_thresh},
              {"max_steps", c.max_steps},
              {"oracle_stop_thresh", c.oracle_stop_thresh},
              {"dtw_spacing", c.dtw_spacing},
              {"resolution", c.resolution},
              {"agent", c.agent}};
  Json per = Json::array();
  for (const auto& e : r.per_episode) per.push_back(episode_result_to_json(e));
  const Aggregates& a = r.aggregates;
  Json agg{{"N", a.N}, {"TL", a.TL}, {"NE", a.NE}, {"SR", a.SR}, {"OSR", a.OSR},
           {"SPL", a.SPL}, {"nDTW", a.nDTW}, {"CR", a.CR}};
  if (a.long_horizon) {
    const auto& lh = *a.long_horizon;
    Json lhj{{"N", lh.N}, {"reached", lh.reached}, {"eligible", lh.eligible}, {"all_success", lh.all_success},
             {"SR_1", opt_pct(lh.SR_1)}};
    for (std::size_t i = 0; i < lh.SR_n.size(); ++i) lhj["SR_" + std::to_string(i + 2)] = opt_pct(lh.SR_n[i]);
    lhj["SR_All"] = opt_pct(lh.SR_All);
    agg["long_horizon"] = lhj;
  }
  return Json{{"config", config}, {"per_episode", per}, {"aggregates", agg}};
}

MetricsReport report_from_json(const JsonReader& j) {
  MetricsReport r;
  const auto c = j.field("config");
  r.config.mode = c.field("mode").string();
  r.config.success_thresh = c.field("success_thresh").number();
  r.config.collision_thresh = c.field("collision_thresh").number();
  r.config.max_steps = static_cast<int>(c.field("max_steps").integer());
  r.config.oracle_stop_thresh = c.field("oracle_stop_thresh").number();
  r.config.dtw_spacing = c.field("dtw_spacing").number();
  r.config.resolution = c.field("resolution").number();
  r.config.agent = c.field("agent").string();
  for (const auto& e : j.field("per_episode").array()) r.per_episode.push_back(episode_result_from_json(e));
  const auto a = j.field("aggregates");
  Aggregates& g = r.aggregates;
  g.N = static_cast<int>(a.field("N").integer());
  g.TL = a.field("TL").number();
  g.NE = a.field("NE").number();
  g.SR = a.field("SR").number();
  g.OSR = a.field("OSR").number();
  g.SPL = a.field("SPL").number();
  g.nDTW = a.field("nDTW").number();
  g.CR = a.field("CR").number();
  if (auto lhj = a.optional_field("long_horizon")) {
    LongHorizonScores lh;
    lh.N = static_cast<int>(lhj->field("N").integer());
    for (const auto& v : lhj->field("reached").array()) lh.reached.push_back(static_cast<int>(v.integer()));
    for (const auto& v : lhj->field("eligible").array()) lh.eligible.push_back(static_cast<int>(v.integer()));
    lh.all_success = static_cast<int>(lhj->field("all_success").integer());
    lh.SR_1 = opt_pct_from(lhj->field("SR_1"));
    for (std::size_t n = 2; n <= lh.reached.size(); ++n) {
      lh.SR_n.push_back(opt_pct_from(lhj->field(("SR_" + std::to_string(n)).c_str())));
    }
    lh.SR_All = opt_pct_from(lhj->field("SR_All"));
    g.long_horizon = lh;
  }
  return r;
}

std::string report_to_csv(const MetricsReport& r) {
  std::size_t goals = 0;
  for (const auto& e : r.per_episode) {
    if (e.metrics.SR_n) goals = std::max(goals, e.metrics.SR_n->size());
  }
  std::string out = "episode_id,TL,NE,SR,OSR,SPL,nDTW,CR";
  for (std::size_t g = 1; g <= goals; ++g) out += ",SR_" + std::to_string(g);
  out += '\n';
  for (const auto& e : r.per_episode) {
    const auto& m = e.metrics;
    out += e.episode_id + "," + num(m.TL) + "," + num(m.NE) + "," + std::to_string(m.SR) + "," +
           std::to_string(m.OSR) + "," + num(m.SPL) + "," + num(m.nDTW) + "," + num(m.CR);
    for (std::size_t g = 0; g < goals; ++g) {
      out += ",";
      if (m.SR_n && g < m.SR_n->size()) out += (*m.SR_n)[g] ? "1" : "0";
    }
    out += '\n';
  }
  return out;
}

void save_report(const MetricsReport& r, const std::string& json_path) {
  write_text_file(json_path, report_to_json(r).dump(2) + "\n");
}

MetricsReport load_report(const std::string& json_path) {
  const Json j = parse_json(read_text_file(json_path), json_path);
  try {
    return report_from_json(JsonReader(j, ""));
  } catch (const Error& e) {
    throw Error(e.code(), json_path + ": " + e.what());
  }
}

}  // namespace navbench
