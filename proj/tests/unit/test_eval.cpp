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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "eval/metrics.hpp"
#include "eval/scoring.hpp"
#include "service/runner.hpp"
#include "sim/simulator.hpp"
#include "tasks/path_sampler.hpp"
#include "test_support.hpp"

namespace navbench {
namespace {

// Minimum over every monotone alignment, enumerated explicitly.
double dtw_enumerate(const std::vector<WorldPoint>& p, const std::vector<WorldPoint>& r) {
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j, double acc) {
    acc += distance(p[i], r[j]);
    if (i + 1 == p.size() && j + 1 == r.size()) {
      best = std::min(best, acc);
      return;
    }
    if (i + 1 < p.size()) walk(i + 1, j, acc);
    if (j + 1 < r.size()) walk(i, j + 1, acc);
    if (i + 1 < p.size() && j + 1 < r.size()) walk(i + 1, j + 1, acc);
  };
  walk(0, 0, 0.0);
  return best;
}

std::vector<WorldPoint> random_points(Rng& rng, std::size_t n) {
  std::vector<WorldPoint> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5)});
  return v;
}

TEST(Dtw, MatchesExhaustiveAlignment) {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_points(rng, static_cast<std::size_t>(rng.uniform_int(1, 6)));
    const auto r = random_points(rng, static_cast<std::size_t>(rng.uniform_int(1, 6)));
    EXPECT_NEAR(dtw(p, r), dtw_enumerate(p, r), 1e-9);
    EXPECT_NEAR(dtw(p, r), dtw(r, p), 1e-9);
  }
}

TEST(Dtw, HandCases) {
  const std::vector<WorldPoint> p{{0, 0}};
  const std::vector<WorldPoint> r{{0, 0}, {3, 4}};
  EXPECT_DOUBLE_EQ(dtw(p, r), 5.0);
  EXPECT_THROW(dtw({}, r), Error);
}

TEST(Ndtw, OffsetReference) {
  std::vector<WorldPoint> r, p;
  for (int i = 0; i < 10; ++i) {
    r.push_back({static_cast<double>(i), 0.0});
    p.push_back({static_cast<double>(i), 1.0});
  }
  EXPECT_NEAR(dtw(p, r), 10.0, 1e-12);
  EXPECT_NEAR(ndtw(p, r, 3.0), std::exp(-1.0 / 3.0), 1e-12);
  EXPECT_NEAR(ndtw(p, r, 3.0), 0.7165, 1e-4);
  EXPECT_DOUBLE_EQ(ndtw(r, r, 3.0), 1.0);
}

TEST(Ndtw, RangeAndIdentity) {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = random_points(rng, static_cast<std::size_t>(rng.uniform_int(1, 30)));
    const auto r = random_points(rng, static_cast<std::size_t>(rng.uniform_int(1, 30)));
    const double v = ndtw(p, r, rng.uniform(0.5, 5.0));
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_EQ(v == 1.0, dtw(p, r) == 0.0);
    EXPECT_DOUBLE_EQ(ndtw(r, r, 3.0), 1.0);
  }
}

TEST(Ndtw, StrictlyDecreasesWithDeviation) {
  std::vector<WorldPoint> r;
  for (int i = 0; i < 12; ++i) r.push_back({0.5 * i, 0.0});
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    auto p = r;
    const auto k = static_cast<std::size_t>(rng.uniform_int(0, 11));
    double prev = 1.0;
    for (double h = 0.1; h < 6.0; h += 0.1) {
      p[k].y = h;
      const double v = ndtw(p, r, 3.0);
      EXPECT_LT(v, prev) << "k=" << k << " h=" << h;
      prev = v;
    }
  }
}

TEST(Downsample, SpacingAndEndpoints) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<WorldPoint> pts{{0, 0}};
    const int n = static_cast<int>(rng.uniform_int(0, 80));
    for (int i = 0; i < n; ++i) pts.push_back(pts.back() + WorldPoint{rng.uniform(-0.1, 0.3), rng.uniform(-0.1, 0.1)});
    const auto d = downsample(pts);
    ASSERT_FALSE(d.empty());
    EXPECT_EQ(d.front(), pts.front());
    EXPECT_EQ(d.back(), pts.back());
    for (std::size_t i = 1; i + 1 < d.size(); ++i) EXPECT_GE(distance(d[i], d[i - 1]), kDtwSpacing);
  }
}

TEST(Spl, HandCases) {
  EXPECT_DOUBLE_EQ(spl(true, 10.0, 12.5), 0.8);
  EXPECT_DOUBLE_EQ(spl(true, 10.0, 8.0), 1.0);
  EXPECT_DOUBLE_EQ(spl(false, 10.0, 10.0), 0.0);
  EXPECT_DOUBLE_EQ(spl(true, 7.3, 7.3), 1.0);  // SPL equals SR when P = L
}

class ScoringTest : public ::testing::Test {
 protected:
  SceneContextPtr ctx = make_scene_context(testing::box_scene(10.0, 5.0));

  Trajectory drive(const Episode& e, const std::vector<Action>& actions, SimConfig cfg = {}) {
    Simulator sim(ctx, cfg);
    sim.reset(e);
    for (const auto& a : actions) {
      if (sim.done()) break;
      sim.step(a);
    }
    return sim.trajectory();
  }
};

TEST_F(ScoringTest, StopFarAwayFails) {
  const Episode e = testing::simple_episode(*ctx, {1, 1, 0}, {8.5, 4});
  const EpisodeResult r = score_episode(e, drive(e, {stop_action()}), *ctx);
  EXPECT_EQ(r.metrics.SR, 0);
  EXPECT_EQ(r.metrics.OSR, 0);
  EXPECT_EQ(r.metrics.SPL, 0.0);
  EXPECT_NEAR(r.metrics.NE, std::hypot(7.5, 3.0), 1e-12);
  EXPECT_EQ(r.metrics.TL, 0.0);
  EXPECT_EQ(r.num_actions, 1);
  EXPECT_EQ(r.metrics.CR, 0.0);
}

TEST_F(ScoringTest, StopNearbySucceeds) {
  const Episode e = testing::simple_episode(*ctx, {1, 2.5, 0}, {3, 2.5});
  std::vector<Action> acts(4, DiscreteAction{Primitive::kForward});
  acts.push_back(stop_action());
  const EpisodeResult r = score_episode(e, drive(e, acts), *ctx);
  EXPECT_EQ(r.metrics.SR, 1);
  EXPECT_EQ(r.metrics.OSR, 1);
  EXPECT_NEAR(r.metrics.TL, 1.0, 1e-9);
  EXPECT_NEAR(r.metrics.NE, 1.0, 1e-9);
  EXPECT_NEAR(r.metrics.SPL, 1.0, 1e-12);  // P < L
  EXPECT_EQ(r.num_actions, 5);
}

TEST_F(ScoringTest, NoStopNoSuccess) {
  const Episode e = testing::simple_episode(*ctx, {1, 2.5, 0}, {2, 2.5});
  SimConfig cfg;
  cfg.max_steps = 5;
  const Trajectory t = drive(e, std::vector<Action>(10, DiscreteAction{Primitive::kTurnLeft}), cfg);
  ASSERT_EQ(t.done_reason, DoneReason::kStepLimit);
  const EpisodeResult r = score_episode(e, t, *ctx);
  EXPECT_EQ(r.metrics.SR, 0);
  EXPECT_EQ(r.metrics.OSR, 1);
}

TEST_F(ScoringTest, CollisionRateIgnoresCadence) {
  const Episode e = testing::simple_episode(*ctx, {8.5, 2.5, 0}, {5, 2.5});
  SimConfig cfg;
  cfg.mode = SimMode::kTelHop;
  std::vector<Action> acts(6, DiscreteAction{Primitive::kForward});
  acts.push_back(stop_action());
  const Trajectory t = drive(e, acts, cfg);
  ASSERT_GT(t.collision_events.size(), 0u);
  const EpisodeResult full = score_episode(e, t, *ctx);
  EXPECT_DOUBLE_EQ(full.metrics.CR, static_cast<double>(t.collision_events.size()) / 7.0);
  Trajectory sparse = t;
  sparse.samples.clear();
  for (std::size_t i = 0; i < t.samples.size(); i += 3) sparse.samples.push_back(t.samples[i]);
  sparse.samples.push_back(t.samples.back());
  EXPECT_DOUBLE_EQ(score_episode(e, sparse, *ctx).metrics.CR, full.metrics.CR);
}

TEST_F(ScoringTest, RejectsMismatchedTrajectory) {
  const Episode e = testing::simple_episode(*ctx, {1, 1, 0}, {3, 1});
  Trajectory t = drive(e, {stop_action()});
  t.episode_id = "other";
  try {
    score_episode(e, t, *ctx);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kMismatchedEpisode);
  }
}

TEST(ScoringProperty, SplBelowSrBelowOsr) {
  int scored = 0;
  for (const auto& ctx : testing::generated_scenes(4, 33)) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const PathSample s = sample_path(*ctx, {}, seed);
      const Episode e = testing::simple_episode(*ctx, s.start, s.goal, "ep_" + std::to_string(seed));
      for (AgentKind kind : {AgentKind::kRandom, AgentKind::kGreedy, AgentKind::kOracleFollower}) {
        for (SimMode mode : {SimMode::kStrict, SimMode::kTelHop}) {
          SimConfig cfg;
          cfg.mode = mode;
          auto agent = make_agent(kind);
          const Trajectory t = run_episode(ctx, e, *agent, cfg, seed);
          const EpisodeResult r = score_episode(e, t, *ctx);
          const auto& m = r.metrics;
          EXPECT_LE(m.SPL, m.SR);
          EXPECT_LE(m.SR, m.OSR);
          EXPECT_GE(m.SPL, 0.0);
          EXPECT_GT(m.nDTW, 0.0);
          EXPECT_LE(m.nDTW, 1.0);
          EXPECT_GE(m.TL, 0.0);
          EXPECT_GE(m.CR, 0.0);
          EXPECT_LE(m.CR, 1.0);
          EXPECT_TRUE(kind != AgentKind::kOracleFollower || m.SR == 1) << e.episode_id;
          ++scored;
        }
      }
    }
  }
  EXPECT_EQ(scored, 4 * 6 * 6);
}

EpisodeResult lh_result(const std::string& id, std::vector<bool> reached, bool stop_ok) {
  EpisodeResult r;
  r.episode_id = id;
  r.task_type = TaskType::kLongHorizon;
  r.per_goal_reached = reached;
  r.metrics.SR_n = reached;
  r.metrics.SR = stop_ok && std::all_of(reached.begin(), reached.end(), [](bool b) { return b; }) ? 1 : 0;
  r.metrics.OSR = r.metrics.SR;
  return r;
}

TEST(LongHorizon, CountArithmetic) {
  std::vector<EpisodeResult> rs;
  for (int i = 0; i < 10; ++i) {
    const bool g1 = i < 8;
    const bool g2 = i < 4;
    rs.push_back(lh_result("lh_" + std::to_string(i), {g1, g2}, true));
  }
  const LongHorizonScores s = score_long_horizon(rs);
  EXPECT_EQ(s.N, 10);
  EXPECT_EQ(*s.SR_1, 80.0);
  ASSERT_EQ(s.SR_n.size(), 1u);
  EXPECT_EQ(*s.SR_n[0], 50.0);
  EXPECT_EQ(*s.SR_All, 40.0);
  EXPECT_EQ(s.all_success, 4);
}

TEST(LongHorizon, UndefinedConditionalIsNull) {
  std::vector<EpisodeResult> rs{lh_result("a", {false, false}, true), lh_result("b", {false, false}, true)};
  const LongHorizonScores s = score_long_horizon(rs);
  EXPECT_EQ(*s.SR_1, 0.0);
  EXPECT_FALSE(s.SR_n[0].has_value());
  const Json j = report_to_json(aggregate(rs, {}));
  EXPECT_TRUE(j["aggregates"]["long_horizon"]["SR_2"].is_null()) << j["aggregates"].dump();
}

TEST(LongHorizon, TelescopingIdentity) {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const int goals = rng.bernoulli(0.5) ? 2 : 3;
    std::vector<EpisodeResult> rs;
    const int n = static_cast<int>(rng.uniform_int(1, 40));
    for (int i = 0; i < n; ++i) {
      std::vector<bool> reached;
      bool chain = true;
      for (int g = 0; g < goals; ++g) {
        chain = chain && rng.bernoulli(0.7);
        reached.push_back(chain);
      }
      rs.push_back(lh_result("e" + std::to_string(i), reached, true));
    }
    const LongHorizonScores s = score_long_horizon(rs);
    EXPECT_EQ(s.all_success, s.reached[static_cast<std::size_t>(goals - 1)]);
    // SR_All * N equals the raw count of all-goal reachers that stopped well.
    EXPECT_NEAR(*s.SR_All * n / 100.0, s.all_success, 0.005 * n);
    bool defined = s.reached[0] > 0;
    double product = static_cast<double>(s.reached[0]) / n;
    for (int g = 1; g < goals; ++g) {
      const int denom = s.reached[static_cast<std::size_t>(g - 1)];
      defined = defined && denom > 0;
      if (denom > 0) product *= static_cast<double>(s.reached[static_cast<std::size_t>(g)]) / denom;
      EXPECT_EQ(s.SR_n[static_cast<std::size_t>(g - 1)].has_value(), denom > 0);
    }
    if (defined) {
      EXPECT_NEAR(product, static_cast<double>(s.all_success) / n, 1e-12);
    }
  }
}

MetricsReport sample_report() {
  std::vector<EpisodeResult> rs{lh_result("lh_b", {true, false}, true), lh_result("lh_a", {true, true}, true)};
  EpisodeResult fine;
  fine.episode_id = "fine_a";
  fine.metrics = {1.25, 0.5, 1, 1, 0.9, 0.75, 0.1, std::nullopt};
  fine.per_goal_reached = {true};
  fine.stop_pose = {1.5, 2.5, 0.25};
  fine.num_actions = 10;
  fine.num_collisions = 1;
  fine.reference_length = 1.1;
  fine.path_length = 1.25;
  rs.push_back(fine);
  ReportConfig cfg;
  cfg.agent = "oracle_follower";
  return aggregate(rs, cfg);
}

TEST(Report, AggregatesAreMeans) {
  const MetricsReport r = sample_report();
  EXPECT_EQ(r.aggregates.N, 3);
  EXPECT_EQ(r.per_episode.front().episode_id, "fine_a");  // sorted
  EXPECT_DOUBLE_EQ(r.aggregates.SR, 66.67);
  EXPECT_NEAR(r.aggregates.CR, 100.0 * 0.1 / 3, 1e-12);
  EXPECT_NEAR(r.aggregates.TL, 1.25 / 3, 1e-12);
  ASSERT_TRUE(r.aggregates.long_horizon);
  EXPECT_EQ(r.aggregates.long_horizon->N, 2);
}

TEST(Report, JsonRoundTrip) {
  const MetricsReport r = sample_report();
  const Json j = report_to_json(r);
  EXPECT_EQ(report_from_json(JsonReader(j, "")), r);
  testing::TempDir tmp;
  save_report(r, tmp.str("r.json"));
  EXPECT_EQ(load_report(tmp.str("r.json")), r);
  for (const char* key : {"config", "per_episode", "aggregates"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["config"]["success_thresh"], 3.0);
  EXPECT_EQ(j["config"]["collision_thresh"], 0.1);
}

TEST(Report, CsvColumns) {
  const std::string csv = report_to_csv(sample_report());
  const std::string header = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(header, "episode_id,TL,NE,SR,OSR,SPL,nDTW,CR,SR_1,SR_2");
  EXPECT_NE(csv.find("\nfine_a,1.25,0.5,1,1,0.9,0.75,0.1,,\n"), std::string::npos) << csv;
  EXPECT_NE(csv.find("\nlh_b,0,0,0,0,0,0,0,1,0\n"), std::string::npos) << csv;
  std::vector<EpisodeResult> plain{sample_report().per_episode.front()};
  EXPECT_EQ(report_to_csv(aggregate(plain, {})).substr(0, 36), "episode_id,TL,NE,SR,OSR,SPL,nDTW,CR\n");
}

}  // namespace
}  // namespace navbench
