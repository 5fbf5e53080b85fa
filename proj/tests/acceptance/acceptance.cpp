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


// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria (capped), so ctest fails on any of them.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "common/error.hpp"
#include "common/json_util.hpp"
#include "common/rng.hpp"
#include "env/generator.hpp"
#include "env/scene.hpp"
#include "env/scene_context.hpp"
#include "eval/metrics.hpp"
#include "eval/scoring.hpp"
#include "geometry/occupancy_grid.hpp"
#include "geometry/planner.hpp"
#include "geometry/ray_cast.hpp"
#include "harness.hpp"
#include "service/runner.hpp"
#include "service/server.hpp"
#include "service/session.hpp"
#include "sim/simulator.hpp"
#include "tasks/dataset.hpp"
#include "tasks/episode.hpp"
#include "tasks/instructions.hpp"
#include "tasks/path_sampler.hpp"

namespace fs = std::filesystem;
using namespace navbench;

namespace {

using Clock = std::chrono::steady_clock;

// Collects failures for one criterion; the first few go on the result line.
struct Check {
  int failures = 0;
  std::vector<std::string> notes;
  std::string summary;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (++failures <= 3) notes.push_back(what);
  }
};

int g_failed = 0;

void criterion(const std::string& name, double limit_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  c.expect(secs < limit_s, "took longer than " + std::to_string(static_cast<int>(limit_s)) + " s");
  std::string detail = c.summary;
  for (const auto& n : c.notes) detail += (detail.empty() ? "" : "; ") + n;
  if (c.failures > 3) detail += "; +" + std::to_string(c.failures - 3) + " more";
  std::printf("%s %s (%.1fs) %s\n", c.failures ? "FAIL" : "PASS", name.c_str(), secs, detail.c_str());
  std::fflush(stdout);
  if (c.failures) ++g_failed;
}

std::string fmt(double v, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

class ScratchDir {
 public:
  ScratchDir() {
    std::string tmpl = (fs::temp_directory_path() / "navbench-accept-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string operator/(const std::string& leaf) const { return (path_ / leaf).string(); }

 private:
  fs::path path_;
};

std::vector<SceneContextPtr> contexts(const std::vector<Scene>& scenes) {
  std::vector<SceneContextPtr> out;
  for (const auto& s : scenes) out.push_back(make_scene_context(s));
  return out;
}

// Byte comparison of two directory trees.
bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
  std::vector<fs::path> fa, fb;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (e.is_regular_file()) fa.push_back(fs::relative(e.path(), a));
  }
  for (const auto& e : fs::recursive_directory_iterator(b)) {
    if (e.is_regular_file()) fb.push_back(fs::relative(e.path(), b));
  }
  std::sort(fa.begin(), fa.end());
  std::sort(fb.begin(), fb.end());
  if (fa != fb) {
    why = "file sets differ";
    return false;
  }
  for (const auto& f : fa) {
    if (read_text_file((a / f).string()) != read_text_file((b / f).string())) {
      why = f.string() + " differs";
      return false;
    }
  }
  if (fa.empty()) {
    why = "no files";
    return false;
  }
  return true;
}

bool ordered_metrics(const EpisodeResult& r) {
  return r.metrics.SPL <= r.metrics.SR && r.metrics.SR <= r.metrics.OSR;
}

// ---- independent oracles ----

// Minimum over every monotone alignment, enumerated recursively.
double dtw_enumerate(const std::vector<WorldPoint>& p, const std::vector<WorldPoint>& r, std::size_t i,
                     std::size_t j) {
  const double here = distance(p[i], r[j]);
  if (i + 1 == p.size() && j + 1 == r.size()) return here;
  double best = std::numeric_limits<double>::infinity();
  if (i + 1 < p.size()) best = std::min(best, dtw_enumerate(p, r, i + 1, j));
  if (j + 1 < r.size()) best = std::min(best, dtw_enumerate(p, r, i, j + 1));
  if (i + 1 < p.size() && j + 1 < r.size()) best = std::min(best, dtw_enumerate(p, r, i + 1, j + 1));
  return here + best;
}

// Textbook Dijkstra on cell centers: 8 moves, diagonals need both
// orthogonal neighbours free. -1 when disconnected.
double dijkstra(const OccupancyGrid& g, Cell s, Cell t) {
  if (g.occupied(s) || g.occupied(t)) return -1.0;
  const int w = g.width();
  std::vector<double> dist(g.cell_count(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[static_cast<std::size_t>(s.row * w + s.col)] = 0.0;
  pq.push({0.0, s.row * w + s.col});
  while (!pq.empty()) {
    const auto [d, i] = pq.top();
    pq.pop();
    if (d > dist[static_cast<std::size_t>(i)]) continue;
    const int r = i / w, c = i % w;
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (!dr && !dc) continue;
        if (g.occupied({r + dr, c + dc})) continue;
        if (dr && dc && (g.occupied({r + dr, c}) || g.occupied({r, c + dc}))) continue;
        const double nd = d + (dr && dc ? std::sqrt(2.0) : 1.0) * g.resolution();
        const int j = (r + dr) * w + c + dc;
        if (nd < dist[static_cast<std::size_t>(j)]) {
          dist[static_cast<std::size_t>(j)] = nd;
          pq.push({nd, j});
        }
      }
    }
  }
  const double d = dist[static_cast<std::size_t>(t.row * w + t.col)];
  return std::isfinite(d) ? d : -1.0;
}

// Distance from p to the nearest occupied cell rectangle within `window`
// (grid edges count as occupied). Capped at window.
double brute_clearance(const OccupancyGrid& g, WorldPoint p, double window) {
  const Cell c = g.locate(p);
  const int k = static_cast<int>(std::ceil(window / g.resolution())) + 1;
  double best = window;
  for (int r = c.row - k; r <= c.row + k; ++r) {
    for (int col = c.col - k; col <= c.col + k; ++col) {
      if (g.occupied({r, col})) best = std::min(best, distance(g.cell_rect({r, col}), p));
    }
  }
  return best;
}

Episode plain_episode(const SceneContext& ctx, Pose start, WorldPoint goal) {
  Episode e;
  e.episode_id = "accept_000";
  e.scene_id = ctx.scene().scene_id;
  e.task_type = TaskType::kFine;
  e.instructions.fine = "Walk forward. Stop near the wall.";
  e.start = start;
  e.goals.push_back({goal, std::nullopt});
  e.reference_path.waypoints = {start.position(), goal};
  e.reference_path.length = distance(start.position(), goal);
  return e;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  return buf;
}

std::string pct(int num, int den) { return den ? fmt(100.0 * num / den) + "%" : "n/a"; }

// ---- shared fixture ----

struct Fixture {
  ScratchDir scratch;
  std::shared_ptr<const LoadedDataset> ds;
  std::map<TaskType, std::vector<const Episode*>> first100;
  double build_secs = 0.0;
};

constexpr int kE2eScenes = 32;
constexpr std::uint64_t kSeed = 2026;

void build_fixture(Fixture& fx, Check& c) {
  const auto t0 = Clock::now();
  const auto ctxs = contexts(generate_scenes(GeneratorParams{}, kE2eScenes, kSeed));
  DatasetParams p;
  p.seed = kSeed;
  p.fine_per_scene = 4;
  p.coarse_per_scene = 4;
  p.long_horizon_per_scene = 4;
  const std::string dir = fx.scratch / "e2e";
  write_dataset(build_dataset(ctxs, p), ctxs, dir);
  fx.ds = std::make_shared<const LoadedDataset>(load_dataset(dir));
  for (const Episode& e : fx.ds->episodes) {
    auto& v = fx.first100[e.task_type];
    if (v.size() < 100) v.push_back(&e);
  }
  fx.build_secs = std::chrono::duration<double>(Clock::now() - t0).count();
  for (TaskType t : kAllTaskTypes) {
    c.expect(fx.first100[t].size() == 100,
             std::string(task_type_name(t)) + " has only " + std::to_string(fx.first100[t].size()) + " episodes");
  }
}

std::vector<const Episode*> all_first100(const Fixture& fx) {
  std::vector<const Episode*> out;
  for (TaskType t : kAllTaskTypes) {
    const auto& v = fx.first100.at(t);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

RunOutput run(const Fixture& fx, const std::vector<const Episode*>& eps, AgentKind agent, SimMode mode,
              std::uint64_t seed) {
  RunOptions o;
  o.agent = agent;
  o.sim.mode = mode;
  o.seed = seed;
  return run_episodes(*fx.ds, eps, o);
}

// ---- criteria ----

void metric_oracles(const Fixture& fx, Check& c) {
  Rng rng(11);
  auto seq = [&](std::size_t n) {
    std::vector<WorldPoint> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5)});
    return v;
  };
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const auto p = seq(static_cast<std::size_t>(rng.uniform_int(1, 6)));
    const auto r = seq(static_cast<std::size_t>(rng.uniform_int(1, 6)));
    const double err = std::abs(dtw(p, r) - dtw_enumerate(p, r, 0, 0));
    worst = std::max(worst, err);
    c.expect(err <= 1e-9, "dtw pair " + std::to_string(k) + " off by " + std::to_string(err));
    c.expect(ndtw(r, r, 3.0) == 1.0, "ndtw(R, R) != 1 on pair " + std::to_string(k));
  }
  c.expect(std::abs(spl(true, 10.0, 12.5) - 0.8) < 1e-12, "SPL(1, 10, 12.5) != 0.8");
  c.expect(spl(true, 10.0, 8.0) == 1.0, "SPL(1, 10, 8) != 1");
  c.expect(spl(false, 10.0, 12.5) == 0.0, "SPL(0, 10, 12.5) != 0");

  // Ordering of the per-episode metrics over every agent and mode.
  std::vector<const Episode*> eps;
  for (TaskType t : kAllTaskTypes) {
    const auto& v = fx.first100.at(t);
    eps.insert(eps.end(), v.begin(), v.begin() + std::min<std::ptrdiff_t>(8, static_cast<std::ptrdiff_t>(v.size())));
  }
  int evaluated = 0;
  for (AgentKind a : {AgentKind::kOracleFollower, AgentKind::kRandom, AgentKind::kGreedy}) {
    for (SimMode m : {SimMode::kStrict, SimMode::kTelHop}) {
      for (const auto& r : run(fx, eps, a, m, 5).report.per_episode) {
        ++evaluated;
        c.expect(ordered_metrics(r), r.episode_id + " breaks SPL <= SR <= OSR");
      }
    }
  }
  c.summary = "200 dtw pairs max err " + sci(worst) + ", " + std::to_string(evaluated) +
              " episodes ordered";
}

void planner_clearance(Check& c) {
  const auto ctxs = contexts(generate_scenes(GeneratorParams{}, 50, 77));
  int paths = 0, waypoints = 0, exhausted = 0;
  double min_clear = std::numeric_limits<double>::infinity();
  for (const auto& ctx : ctxs) {
    std::vector<PathSample> samples;
    for (std::uint64_t s = 0; s < 4; ++s) {
      try {
        samples.push_back(s % 2 ? sample_object_path(*ctx, {}, s) : sample_path(*ctx, {}, s));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kSamplingExhausted) throw;
        ++exhausted;
      }
    }
    for (const auto& s : samples) {
      ++paths;
      for (const auto& w : s.path.waypoints) {
        ++waypoints;
        const double cl = brute_clearance(ctx->raw_grid(), w, 1.0);
        min_clear = std::min(min_clear, cl);
        c.expect(cl >= ctx->agent().radius, ctx->scene().scene_id + " waypoint clearance " + fmt(cl, 4));
      }
    }
  }
  c.expect(paths >= 150, "only " + std::to_string(paths) + " paths sampled");

  Rng rng(3);
  int agree = 0, connected = 0;
  for (int k = 0; k < 100; ++k) {
    const int w = static_cast<int>(rng.uniform_int(2, 20));
    const int h = static_cast<int>(rng.uniform_int(2, 20));
    const double res = k % 2 ? 0.05 : 1.0;
    OccupancyGrid g(res, {rng.uniform(-2, 2), rng.uniform(-2, 2)}, w, h);
    const double density = rng.uniform(0.05, 0.4);
    for (int r = 0; r < h; ++r) {
      for (int col = 0; col < w; ++col) g.set_occupied({r, col}, rng.bernoulli(density));
    }
    const Cell s{static_cast<int>(rng.uniform_int(0, h - 1)), static_cast<int>(rng.uniform_int(0, w - 1))};
    const Cell t{static_cast<int>(rng.uniform_int(0, h - 1)), static_cast<int>(rng.uniform_int(0, w - 1))};
    g.set_occupied(s, false);
    g.set_occupied(t, false);
    const double want = dijkstra(g, s, t);
    const auto got = astar(g, g.cell_center(s), g.cell_center(t));
    bool ok = false;
    if (want < 0) {
      ok = !got;
    } else {
      ++connected;
      ok = got && std::abs(got->length - want) <= 1e-9;
    }
    agree += ok;
    c.expect(ok, "grid " + std::to_string(k) + ": astar disagrees with dijkstra");
  }
  c.expect(connected >= 50, "only " + std::to_string(connected) + " connected grid pairs");
  c.summary = std::to_string(paths) + " paths / " + std::to_string(waypoints) + " waypoints, min clearance " +
              fmt(min_clear, 3) + " m (" + std::to_string(exhausted) + " draws exhausted); astar == dijkstra " +
              std::to_string(agree) + "/100 (" + std::to_string(connected) + " connected)";
}

void collision_semantics(Check& c) {
  Scene s;
  s.scene_id = "wall_box";
  s.bounds = {{0.0, 0.0}, {6.0, 4.0}};
  s.rooms.push_back({"room_0", "living room", s.bounds, {}});
  const auto ctx = make_scene_context(s);
  const double face = 3.0 + ray_cast(ctx->raw_grid(), {3.0, 2.0}, 0.0);
  const double radius = ctx->agent().radius;
  struct Case {
    double gap, commanded;
    bool event;
  };
  const Case cases[] = {{1.0, 0.5, false},   {0.5, 0.55, false}, {0.501, 0.6, false}, {0.499, 0.6, true},
                        {0.5, 0.65, true},   {0.5, 1.0, true},   {0.2, 0.25, false},  {0.1, 0.25, true}};
  int rows = 0;
  for (const Case& tc : cases) {
    for (SimMode mode : {SimMode::kStrict, SimMode::kTelHop}) {
      SimConfig cfg;
      cfg.mode = mode;
      Simulator sim(ctx, cfg);
      sim.reset(plain_episode(*ctx, {face - radius - tc.gap, 2.0, 0.0}, {1.0, 2.0}));
      const int ticks = static_cast<int>(std::lround(tc.commanded / 0.05));
      const StepResult r = sim.step(ContinuousAction{1.0, 0.0, ticks * 0.05});
      const std::string tag = "gap " + fmt(tc.gap, 3) + " cmd " + fmt(tc.commanded) + " " +
                              std::string(sim_mode_name(mode));
      const double expected_blocked = std::max(0.0, tc.commanded - tc.gap);
      c.expect(std::abs(r.blocked_displacement - expected_blocked) < 1e-6,
               tag + ": blocked " + fmt(r.blocked_displacement, 6));
      c.expect(r.collided == tc.event, tag + ": event " + (r.collided ? "yes" : "no"));
      c.expect(r.collided == (r.blocked_displacement >= cfg.collision_thresh), tag + ": event disagrees with blocked");
      c.expect(sim.trajectory().collision_events.size() == (tc.event ? 1u : 0u), tag + ": event count");
      if (mode == SimMode::kStrict) {
        c.expect(r.done == tc.event, tag + ": done flag");
        if (tc.event) c.expect(r.done_reason == DoneReason::kCollision, tag + ": done_reason");
      } else {
        c.expect(!r.done, tag + ": tel-hop terminated");
      }
      ++rows;
    }
  }

  // Hops land on the nearest free planning cell, found by scanning them all.
  const auto gen = contexts(generate_scenes(GeneratorParams{}, 3, 5));
  Rng rng(9);
  int hops = 0, relocated = 0;
  for (const auto& g : gen) {
    const OccupancyGrid& nav = g->nav_grid();
    std::vector<WorldPoint> free_centers;
    for (int r = 0; r < nav.height(); ++r) {
      for (int col = 0; col < nav.width(); ++col) {
        if (nav.free({r, col})) free_centers.push_back(nav.cell_center({r, col}));
      }
    }
    const Rect b = g->scene().bounds;
    for (int k = 0; k < 40; ++k) {
      SimConfig cfg;
      cfg.mode = SimMode::kTelHop;
      Simulator sim(g, cfg);
      const WorldPoint start = free_centers[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(free_centers.size()) - 1))];
      sim.reset(plain_episode(*g, {start.x, start.y, 0.0}, free_centers.front()));
      const WorldPoint target{rng.uniform(b.min.x - 0.5, b.max.x + 0.5), rng.uniform(b.min.y - 0.5, b.max.y + 0.5)};
      WorldPoint want{};
      double best = std::numeric_limits<double>::infinity();
      for (const auto& p : free_centers) {
        const double d = distance(p, target);
        if (d < best) {
          best = d;
          want = p;
        }
      }
      // Targets in free space are kept as given; only blocked ones move.
      const int col = static_cast<int>(std::floor((target.x - nav.origin().x) / nav.resolution()));
      const int row = static_cast<int>(std::floor((target.y - nav.origin().y) / nav.resolution()));
      const bool blocked = row < 0 || col < 0 || row >= nav.height() || col >= nav.width() ||
                           nav.cells()[static_cast<std::size_t>(row * nav.width() + col)] != 0;
      if (!blocked) want = target;
      const StepResult r = sim.step(WaypointHop{target});
      ++hops;
      relocated += blocked;
      c.expect(sim.pose().x == want.x && sim.pose().y == want.y, g->scene().scene_id + ": hop landed elsewhere");
      c.expect(!r.collided && !r.done, g->scene().scene_id + ": hop counted as a collision");
    }
  }
  c.expect(relocated >= 20, "only " + std::to_string(relocated) + " hops needed relocation");
  c.summary = std::to_string(rows) + " wall-approach rows, " + std::to_string(hops) + " hops checked (" +
              std::to_string(relocated) + " relocated)";
}

void end_to_end(const Fixture& fx, Check& c, std::vector<EpisodeResult>& lh_oracle) {
  std::ostringstream sum;
  for (TaskType t : kAllTaskTypes) {
    const auto out = run(fx, fx.first100.at(t), AgentKind::kOracleFollower, SimMode::kStrict, 1);
    const Aggregates& a = out.report.aggregates;
    const std::string name(task_type_name(t));
    c.expect(a.N == 100, name + ": N " + std::to_string(a.N));
    c.expect(a.SR == 100.0, name + ": oracle SR " + fmt(a.SR));
    c.expect(a.CR == 0.0, name + ": oracle CR " + fmt(a.CR));
    c.expect(a.SPL >= 0.99, name + ": oracle SPL " + fmt(a.SPL, 4));
    c.expect(a.nDTW >= 0.95, name + ": oracle nDTW " + fmt(a.nDTW, 4));
    for (const auto& r : out.report.per_episode) {
      c.expect(ordered_metrics(r), r.episode_id + " breaks SPL <= SR <= OSR");
      if (r.metrics.SR != 1) c.expect(false, r.episode_id + " oracle failed (" + std::string(done_reason_name(r.done_reason)) + ")");
    }
    if (t == TaskType::kLongHorizon) lh_oracle = out.report.per_episode;
    sum << name << " SR " << fmt(a.SR) << " CR " << fmt(a.CR) << " SPL " << fmt(a.SPL, 3) << " nDTW "
        << fmt(a.nDTW, 3) << "; ";
  }

  std::vector<const Episode*> far;
  for (const Episode* e : all_first100(fx)) {
    const auto ctx = fx.ds->scene_for(*e);
    const auto d = geodesic_distance(ctx->agent_grid(), e->start.position(), e->final_goal().point);
    if (d && *d >= 6.0) far.push_back(e);
  }
  c.expect(far.size() >= 50, "only " + std::to_string(far.size()) + " episodes with geodesic >= 6 m");
  if (!far.empty()) {
    const auto out = run(fx, far, AgentKind::kRandom, SimMode::kStrict, 4242);
    int wins = 0;
    for (const auto& r : out.report.per_episode) {
      wins += r.metrics.SR;
      c.expect(ordered_metrics(r), r.episode_id + " breaks SPL <= SR <= OSR");
    }
    c.expect(10 * wins < static_cast<int>(far.size()), "random SR " + pct(wins, static_cast<int>(far.size())));
    sum << "random SR " << pct(wins, static_cast<int>(far.size())) << " on " << far.size() << " far episodes";
  }
  sum << "; dataset build " << fmt(fx.build_secs, 1) << "s";
  c.summary = sum.str();
}

// Recounts everything score_long_horizon reports from the per-episode flags.
void check_long_horizon(Check& c, const std::string& tag, const std::vector<EpisodeResult>& results) {
  const LongHorizonScores got = score_long_horizon(results);
  int N = 0, all = 0;
  std::size_t max_goals = 0;
  for (const auto& r : results) max_goals = std::max(max_goals, r.per_goal_reached.size());
  std::vector<int> reached(max_goals, 0), eligible(max_goals, 0), denom(max_goals, 0);
  for (const auto& r : results) {
    ++N;
    const auto& f = r.per_goal_reached;
    std::size_t prefix = 0;
    while (prefix < f.size() && f[prefix]) ++prefix;
    for (std::size_t g = 0; g < f.size(); ++g) {
      ++eligible[g];
      if (g < prefix) ++reached[g];
      if (g > 0 && prefix >= g) ++denom[g];
    }
    const bool stopped_ok = r.done_reason == DoneReason::kStopped && r.metrics.SR == 1;
    if (prefix == f.size() && stopped_ok) ++all;
    c.expect(r.metrics.SR == 0 || prefix == f.size(), tag + ": " + r.episode_id + " succeeded without every goal");
  }
  c.expect(got.N == N, tag + ": N");
  c.expect(got.reached == reached, tag + ": reached counts");
  c.expect(got.eligible == eligible, tag + ": eligible counts");
  c.expect(got.all_success == all, tag + ": all_success " + std::to_string(got.all_success) + " vs " +
                                       std::to_string(all));
  if (N == 0) return;
  // SR_All * N equals the number of all-goal reachers that stopped successfully.
  c.expect(got.SR_All && *got.SR_All == round2(100.0 * all / N), tag + ": SR_All");
  c.expect(got.SR_1 && *got.SR_1 == round2(100.0 * reached[0] / N), tag + ": SR_1");
  c.expect(got.SR_n.size() + 1 == max_goals, tag + ": SR_n length");
  for (std::size_t n = 1; n < max_goals && n - 1 < got.SR_n.size(); ++n) {
    const auto& v = got.SR_n[n - 1];
    if (denom[n] == 0) {
      c.expect(!v, tag + ": SR_" + std::to_string(n + 1) + " should be null");
    } else {
      c.expect(v && *v == round2(100.0 * reached[n] / denom[n]), tag + ": SR_" + std::to_string(n + 1));
    }
    // Telescoping in counts: reaching goal n+1 implies reaching goal n.
    c.expect(reached[n] <= denom[n] && denom[n] <= reached[n - 1], tag + ": counts do not telescope at " +
                                                                       std::to_string(n + 1));
  }
  // Within chains of one length k the conditional rates multiply out to
  // the fraction reaching goal k: prod(reached_i / reached_{i-1}) = reached_k / N_k.
  for (std::size_t k = 2; k <= max_goals; ++k) {
    std::vector<long long> r(k + 1, 0);
    for (const auto& e : results) {
      if (e.per_goal_reached.size() != k) continue;
      ++r[0];
      for (std::size_t g = 0; g < k && e.per_goal_reached[g]; ++g) ++r[g + 1];
    }
    if (r[0] == 0) continue;
    long long num = 1, den = 1;
    bool nonzero = true;
    for (std::size_t g = 1; g <= k; ++g) {
      if (r[g - 1] == 0) {
        nonzero = false;
        break;
      }
      num *= r[g];
      den *= r[g - 1];
    }
    if (nonzero) c.expect(num * r[0] == den * r[k], tag + ": product of conditionals for length " + std::to_string(k));
  }
}

void long_horizon(const Fixture& fx, Check& c, const std::vector<EpisodeResult>& oracle) {
  check_long_horizon(c, "oracle", oracle);
  const auto& eps = fx.first100.at(TaskType::kLongHorizon);
  int reached_random = 0;
  for (AgentKind a : {AgentKind::kRandom, AgentKind::kGreedy}) {
    for (SimMode m : {SimMode::kStrict, SimMode::kTelHop}) {
      const auto out = run(fx, eps, a, m, 31);
      check_long_horizon(c, std::string(agent_kind_name(a)) + "/" + std::string(sim_mode_name(m)),
                         out.report.per_episode);
      c.expect(out.report.aggregates.long_horizon.has_value(), "report lacks long-horizon scores");
      for (const auto& r : out.report.per_episode) reached_random += !r.per_goal_reached.empty() && r.per_goal_reached[0];
    }
  }
  std::vector<EpisodeResult> two;
  for (const auto& r : oracle) {
    if (r.per_goal_reached.size() == 2) two.push_back(r);
  }
  c.expect(two.size() >= 10, "only " + std::to_string(two.size()) + " two-goal chains");
  const LongHorizonScores s = score_long_horizon(two);
  c.expect(s.SR_1 == 100.0, "oracle SR_1 on 2-goal chains");
  c.expect(s.SR_n.size() == 1 && s.SR_n[0] == 100.0, "oracle SR_2 on 2-goal chains");
  c.expect(s.SR_All == 100.0, "oracle SR_All on 2-goal chains");
  c.summary = "oracle 2-goal chains " + std::to_string(two.size()) + ": SR_1 " + fmt(s.SR_1.value_or(-1)) +
              " SR_2 " + fmt(s.SR_n.empty() ? -1 : s.SR_n[0].value_or(-1)) + " SR_All " +
              fmt(s.SR_All.value_or(-1)) + "; recount identical for 5 agent/mode runs over " +
              std::to_string(oracle.size()) + " chains (" + std::to_string(reached_random) +
              " baseline first-goal reaches)";
}

void determinism(const Fixture& fx, Check& c) {
  ScratchDir d;
  const GeneratorParams gp;
  std::string why;

  // Scenes.
  const auto scenes_a = generate_scenes(gp, 6, 404);
  const auto scenes_b = generate_scenes(gp, 6, 404);
  write_scene_dir(scenes_a, gp, 404, d / "scenes_a");
  write_scene_dir(scenes_b, gp, 404, d / "scenes_b");
  c.expect(same_tree(d / "scenes_a", d / "scenes_b", why), "scene files: " + why);
  for (const Scene& s : scenes_a) {
    const std::string path = d / (s.scene_id + ".json");
    save_scene(s, path);
    const Scene back = load_scene(path);
    c.expect(back == s, s.scene_id + ": scene load(save(s)) != s");
    c.expect(scene_to_json(back) == read_text_file(path), s.scene_id + ": scene re-save differs");
  }

  // Episodes, across thread counts.
  const auto ctxs = contexts(scenes_a);
  DatasetParams p;
  p.seed = 404;
  p.threads = 1;
  write_dataset(build_dataset(ctxs, p), ctxs, d / "ds_a");
  p.threads = 3;
  write_dataset(build_dataset(contexts(scenes_b), p), contexts(scenes_b), d / "ds_b");
  c.expect(same_tree(d / "ds_a", d / "ds_b", why), "dataset (1 vs 3 threads): " + why);
  const LoadedDataset loaded = load_dataset(d / "ds_a");
  for (const char* split : kSplitNames) {
    const std::string path = d / ("ds_a/" + std::string(split) + ".jsonl");
    const std::string text = read_text_file(path);
    const auto eps = episodes_from_jsonl(text, path);
    c.expect(episodes_to_jsonl(eps) == text, std::string(split) + ": jsonl re-save differs");
    c.expect(episodes_from_jsonl(episodes_to_jsonl(eps), path) == eps, std::string(split) + ": jsonl round trip");
  }

  // Reports, across thread counts.
  std::vector<const Episode*> eps;
  for (const auto& e : loaded.episodes) eps.push_back(&e);
  for (AgentKind a : {AgentKind::kOracleFollower, AgentKind::kRandom}) {
    RunOptions o;
    o.agent = a;
    o.seed = 8;
    o.threads = 1;
    const auto r1 = run_episodes(loaded, eps, o);
    o.threads = 2;
    const auto r2 = run_episodes(loaded, eps, o);
    const std::string n(agent_kind_name(a));
    save_report(r1.report, d / (n + "_1.json"));
    save_report(r2.report, d / (n + "_2.json"));
    c.expect(read_text_file(d / (n + "_1.json")) == read_text_file(d / (n + "_2.json")), n + ": report bytes differ");
    c.expect(report_to_csv(r1.report) == report_to_csv(r2.report), n + ": report csv differs");
    c.expect(load_report(d / (n + "_1.json")) == r1.report, n + ": report round trip");
  }

  // Fine instructions: 50 scenes x 10.
  const auto fine_ctxs = contexts(generate_scenes(gp, 50, 505));
  DatasetParams fp;
  fp.seed = 505;
  fp.tasks = {TaskType::kFine};
  fp.fine_per_scene = 10;
  fp.coarse_per_scene = 0;
  fp.long_horizon_per_scene = 0;
  const Dataset fine = build_dataset(fine_ctxs, fp);
  int total = 0, passed = 0, forbidden = 0;
  for (const auto& [split, list] : fine.episodes) {
    for (const Episode& e : list) {
      ++total;
      const FineCheck fc = check_fine_instruction(e.instructions.fine.value_or(""));
      passed += fc.ok();
      forbidden += fc.forbidden;
      c.expect(fc.ok(), e.episode_id + " fails the validator: " + e.instructions.fine.value_or(""));
    }
  }
  c.expect(total == 500, "generated " + std::to_string(total) + " fine episodes");
  c.expect(forbidden == 0, std::to_string(forbidden) + " with forbidden verbs");
  (void)fx;
  c.summary = "scenes, 1/3-thread episodes and 1/2-thread reports byte-identical; fine validator " +
              std::to_string(passed) + "/" + std::to_string(total) + ", forbidden " + std::to_string(forbidden);
}

void protocol(const Fixture& fx, Check& c) {
  const harness::FuzzStats st = harness::fuzz_sessions(fx.ds, 10000, 250, 4711);
  c.expect(st.messages == 10000, "sent " + std::to_string(st.messages));
  c.expect(st.replies == st.messages, std::to_string(st.replies) + " replies");
  c.expect(st.bad_replies == 0, std::to_string(st.bad_replies) + " malformed replies");
  for (const auto& p : st.problems) c.expect(false, p);
  c.expect(!st.error_codes.count("internal"), "internal errors surfaced");

  // Live sessions over a real socket against offline eval of their logs.
  Server server(fx.ds, {});
  server.start();
  std::thread loop([&] { server.run(); });
  int matched = 0;
  try {
    const auto all = all_first100(fx);
    for (int n = 0; n < 20; ++n) {
      const Episode& e = *all[static_cast<std::size_t>(n) * all.size() / 20];
      harness::LoopbackClient client(server.port());
      std::int64_t seq = 0;
      std::string sid;
      const AgentKind kind = n % 3 == 0 ? AgentKind::kOracleFollower : n % 3 == 1 ? AgentKind::kRandom : AgentKind::kGreedy;
      const SimMode mode = n % 2 ? SimMode::kTelHop : SimMode::kStrict;
      const auto live = harness::drive_episode([&](const std::string& l) { return client.request(l); }, *fx.ds, e,
                                               kind, mode, static_cast<std::uint64_t>(n), seq, sid);
      const auto diff = harness::compare_live_offline(*fx.ds, live.done, {});
      c.expect(!diff, e.episode_id + ": " + diff.value_or(""));
      matched += !diff;
    }
  } catch (...) {
    server.stop();
    loop.join();
    throw;
  }
  server.stop();
  loop.join();
  c.summary = std::to_string(st.messages) + " fuzzed messages, " + std::to_string(st.replies) + " replies, " +
              std::to_string(st.bad_replies) + " malformed, " + std::to_string(st.progress) +
              " accepted; live == offline " + std::to_string(matched) + "/20";
}

}  // namespace

int main() {
  Fixture fx;
  Check setup;
  try {
    build_fixture(fx, setup);
  } catch (const std::exception& e) {
    setup.expect(false, e.what());
  }
  if (setup.failures) {
    for (const auto& n : setup.notes) std::printf("FAIL fixture %s\n", n.c_str());
    return 1;
  }
  std::vector<EpisodeResult> lh_oracle;
  criterion("metric-oracles", 10, [&](Check& c) { metric_oracles(fx, c); });
  criterion("planner-clearance", 60, planner_clearance);
  criterion("collision-semantics", 60, collision_semantics);
  // The dataset build is part of the end-to-end budget.
  criterion("end-to-end", 300 - fx.build_secs, [&](Check& c) { end_to_end(fx, c, lh_oracle); });
  criterion("long-horizon-identity", 120, [&](Check& c) { long_horizon(fx, c, lh_oracle); });
  criterion("determinism-formats", 300, [&](Check& c) { determinism(fx, c); });
  criterion("protocol-robustness", 300, [&](Check& c) { protocol(fx, c); });
  return std::min(g_failed, 100);
}
