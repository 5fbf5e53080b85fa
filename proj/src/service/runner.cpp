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

#include "service/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace navbench {

Trajectory run_episode(SceneContextPtr ctx, const Episode& episode, Agent& agent, const SimConfig& config,
                       std::uint64_t seed) {
  Simulator sim(ctx, config);
  Observation obs = sim.reset(episode);
  agent.reset(episode, ctx, config, seed);
  while (!sim.done()) obs = sim.step(agent.act(obs)).observation;
  return sim.trajectory();
}

std::vector<WorldPoint> ring_candidates(const SceneContext& ctx, const Pose& pose, double radius, int count) {
  const OccupancyGrid& grid = ctx.agent_grid();
  std::vector<WorldPoint> out;
  for (int i = 0; i < count; ++i) {
    const double a = pose.yaw + 2.0 * M_PI * i / count;
    const WorldPoint p{pose.x + radius * std::cos(a), pose.y + radius * std::sin(a)};
    const auto c = grid.cell_of(p);
    if (c && !grid.occupied(*c)) out.push_back(p);
  }
  if (out.empty()) out.push_back({pose.x, pose.y});
  return out;
}

SupervisedRollout supervised_rollout(SceneContextPtr ctx, const Episode& episode, const CandidatePolicy& policy,
                                     double ratio, std::uint64_t seed, const SimConfig& config) {
  if (config.mode != SimMode::kTelHop) {
    throw Error(ErrorCode::kInvalidArgument, "supervised rollout needs telhop mode");
  }
  Simulator sim(ctx, config);
  Observation obs = sim.reset(episode);
  Rng rng(seed);
  const WorldPoint target = episode.final_goal().point;
  SupervisedRollout out;
  while (!sim.done()) {
    RolloutRecord rec;
    rec.supervision = supervise(*ctx, ring_candidates(*ctx, obs.pose), obs.pose, target, ratio, rng);
    rec.predicted = policy(obs, rec.supervision.candidates);
    if (rec.predicted && *rec.predicted >= rec.supervision.candidates.size()) {
      throw Error(ErrorCode::kInvalidArgument, "policy picked candidate " + std::to_string(*rec.predicted) + " of " +
                                                   std::to_string(rec.supervision.candidates.size()));
    }
    if (rec.supervision.from_oracle) {
      rec.executed_stop = rec.supervision.oracle_stop;
      rec.executed_target = rec.supervision.candidates[rec.supervision.oracle_index];
    } else {
      rec.executed_stop = !rec.predicted;
      if (rec.predicted) rec.executed_target = rec.supervision.candidates[*rec.predicted];
    }
    const Action a = rec.executed_stop ? stop_action() : Action{WaypointHop{rec.executed_target}};
    out.transcript.push_back(rec);
    obs = sim.step(a).observation;
  }
  out.trajectory = sim.trajectory();
  return out;
}

ReportConfig report_config(const SimConfig& sim, const std::string& agent, double resolution) {
  ReportConfig c;
  c.mode = std::string(sim_mode_name(sim.mode));
  c.success_thresh = sim.success_thresh;
  c.collision_thresh = sim.collision_thresh;
  c.max_steps = sim.max_steps;
  c.oracle_stop_thresh = kOracleStopThreshold;
  c.resolution = resolution;
  c.agent = agent;
  return c;
}

RunOutput run_episodes(const LoadedDataset& dataset, const std::vector<const Episode*>& episodes,
                       const RunOptions& options) {
  if (episodes.empty()) throw Error(ErrorCode::kInvalidArgument, "no episodes selected");
  std::vector<Trajectory> trajectories(episodes.size());
  std::vector<EpisodeResult> results(episodes.size());
  std::vector<std::string> errors(episodes.size());
  std::vector<ErrorCode> codes(episodes.size(), ErrorCode::kInternal);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < episodes.size();) {
      try {
        const Episode& e = *episodes[i];
        auto ctx = dataset.scene_for(e);
        auto agent = make_agent(options.agent);
        trajectories[i] = run_episode(ctx, e, *agent, options.sim, mix_seed(options.seed, hash_string(e.episode_id)));
        results[i] = score_episode(e, trajectories[i], *ctx);
      } catch (const Error& err) {
        codes[i] = err.code();
        errors[i] = err.what();
      } catch (const std::exception& err) {
        errors[i] = err.what();
      }
    }
  };
  const int n = std::max(1, std::min<int>(options.threads, static_cast<int>(episodes.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) throw Error(codes[i], "episode '" + episodes[i]->episode_id + "': " + errors[i]);
  }

  std::vector<std::size_t> order(episodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return episodes[a]->episode_id < episodes[b]->episode_id; });
  RunOutput out;
  std::vector<EpisodeResult> sorted;
  for (std::size_t i : order) {
    out.trajectories.push_back(std::move(trajectories[i]));
    sorted.push_back(std::move(results[i]));
  }
  const double res = dataset.scenes.empty() ? 0.05 : dataset.scenes.begin()->second->nav_params().resolution;
  out.report = aggregate(std::move(sorted), report_config(options.sim, std::string(agent_kind_name(options.agent)), res));
  return out;
}

}  // namespace navbench
