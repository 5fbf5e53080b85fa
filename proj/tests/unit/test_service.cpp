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
#include <set>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "env/scene_graph.hpp"
#include "eval/scoring.hpp"
#include "geometry/planner.hpp"
#include "service/agents.hpp"
#include "service/oracle.hpp"
#include "service/runner.hpp"
#include "sim/simulator.hpp"
#include "tasks/instructions.hpp"
#include "test_support.hpp"

namespace navbench {
namespace {

using testing::box_scene;
using testing::make_object;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

SceneContextPtr kitchen() {
  Scene s = box_scene(10.0, 6.0);
  s.rooms[0].label = "kitchen";
  s.objects.push_back(make_object("table_0", "table", Rect{{7.0, 2.0}, {8.0, 3.0}}, 0.0, 0.75));
  s.objects.push_back(make_object("cup_0", "cup", Disc{{7.5, 2.5}, 0.05}, 0.75, 0.85));
  return make_scene_context(s);
}

Episode dialogue_episode(const SceneContext& ctx, Pose start) {
  Episode e = testing::simple_episode(ctx, start, nearest_free_point(ctx.nav_grid(), {7.5, 2.5}), "dlg_000");
  e.task_type = TaskType::kDialogue;
  e.goals[0].target_object_id = "cup_0";
  e.instructions.fine.reset();
  e.instructions.coarse = CoarseInstructions{"Find the cup.", "Find the cup, please?", "Cup."};
  e.instructions.oracle_enabled = true;
  return e;
}

TEST(Oracle, WhereQueryCitesGraphEdges) {
  const auto ctx = kitchen();
  const Episode e = dialogue_episode(*ctx, {1, 3, 0});
  const OracleAnswer a = oracle_answer("Where is the cup?", e, {1, 3, 0}, *ctx);
  EXPECT_NE(a.text.find("The cup is on the table."), std::string::npos) << a.text;
  EXPECT_NE(a.text.find("in the kitchen"), std::string::npos) << a.text;
  ASSERT_FALSE(a.facts_used.empty());
  std::set<std::string> ids;
  for (const auto& edge : ctx->graph().edges) ids.insert(edge.id());
  for (const auto& f : a.facts_used) EXPECT_TRUE(ids.count(f)) << f;
}

TEST(Oracle, HintMatchesGeodesicEverywhere) {
  const auto ctx = kitchen();
  const Episode e = dialogue_episode(*ctx, {1, 3, 0});
  Rng rng(4);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const Pose p{rng.uniform(0.0, 10.0), rng.uniform(0.0, 6.0), rng.uniform(-3.0, 3.0)};
    const OracleAnswer a = oracle_answer(i % 2 ? "how far?" : "blah", e, p, *ctx);
    const auto geo = geodesic_distance(ctx->agent_grid(), p.position(), e.final_goal().point);
    ASSERT_EQ(a.hint.geodesic_remaining.has_value(), geo.has_value());
    if (geo) {
      EXPECT_DOUBLE_EQ(*a.hint.geodesic_remaining, *geo);
      ++checked;
    }
    const WorldPoint d = e.final_goal().point - p.position();
    EXPECT_NEAR(std::cos(a.hint.bearing_to_goal), std::cos(std::atan2(d.y, d.x) - p.yaw), 1e-9);
    EXPECT_NEAR(std::sin(a.hint.bearing_to_goal), std::sin(std::atan2(d.y, d.x) - p.yaw), 1e-9);
  }
  EXPECT_GT(checked, 100);
}

TEST(Oracle, UnknownQueryGetsHintOnly) {
  const auto ctx = kitchen();
  const Episode e = dialogue_episode(*ctx, {1, 3, 0});
  const OracleAnswer a = oracle_answer("tell me a joke", e, {1, 3, 0}, *ctx);
  EXPECT_TRUE(a.facts_used.empty());
  EXPECT_EQ(a.text.rfind("The goal is about ", 0), 0u) << a.text;
  const OracleAnswer room = oracle_answer("which way to the next room?", e, {1, 3, 0}, *ctx);
  EXPECT_NE(room.text.find("Head for the kitchen next."), std::string::npos) << room.text;
  const Json j = oracle_answer_to_json(a);
  EXPECT_EQ(j["text"], a.text);
  EXPECT_TRUE(j["hint"].contains("geodesic_remaining"));
}

TEST(Oracle, DisabledOutsideDialogue) {
  const auto ctx = kitchen();
  const Episode e = testing::simple_episode(*ctx, {1, 3, 0}, {3, 3});
  EXPECT_EQ(code_of([&] { oracle_answer("where?", e, {1, 3, 0}, *ctx); }), ErrorCode::kOracleDisabled);
}

TEST(Supervise, PicksGeodesicArgmin) {
  const auto ctx = make_scene_context(box_scene(10.0, 5.0));
  Rng rng(1);
  const WorldPoint target{6.0, 2.5};
  SupervisionStep s = supervise(*ctx, {{2.0, 2.5}, {4.0, 2.5}}, {1, 2.5, 0}, target, 1.0, rng);
  EXPECT_EQ(s.oracle_index, 1u);
  // Ties keep list order; unreachable candidates lose.
  s = supervise(*ctx, {{-3.0, 2.5}, {6.0, 1.5}, {6.0, 3.5}}, {1, 2.5, 0}, target, 1.0, rng);
  EXPECT_EQ(s.oracle_index, 1u);
  EXPECT_THROW(supervise(*ctx, {}, {1, 2.5, 0}, target, 1.0, rng), Error);
}

TEST(Supervise, ArgminPropertyOnGeneratedScenes) {
  for (const auto& ctx : testing::generated_scenes(3, 12)) {
    const auto cells = testing::free_cells(ctx->agent_grid());
    Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
      const auto pick = [&] {
        return ctx->agent_grid().cell_center(cells[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(cells.size()) - 1))]);
      };
      const WorldPoint target = pick();
      std::vector<WorldPoint> cands;
      for (int k = 0; k < 6; ++k) cands.push_back(pick());
      const SupervisionStep s = supervise(*ctx, cands, make_pose(cands[0], 0.0), target, 0.5, rng);
      const double chosen = *geodesic_distance(ctx->agent_grid(), cands[s.oracle_index], target);
      for (std::size_t k = 0; k < cands.size(); ++k) {
        const double g = *geodesic_distance(ctx->agent_grid(), cands[k], target);
        if (k < s.oracle_index) {
          EXPECT_GT(g, chosen);
        } else {
          EXPECT_GE(g, chosen);
        }
      }
    }
  }
}

TEST(Supervise, OracleStopWithinThreshold) {
  const auto ctx = make_scene_context(box_scene(10.0, 5.0));
  Rng rng(1);
  const WorldPoint target{5.0, 2.5};
  EXPECT_TRUE(supervise(*ctx, {{1, 1}}, {3.8, 2.5, 0}, target, 1.0, rng).oracle_stop);
  EXPECT_FALSE(supervise(*ctx, {{1, 1}}, {3.4, 2.5, 0}, target, 1.0, rng).oracle_stop);
  EXPECT_FALSE(oracle_stop_condition(*ctx, {5.0, 0.1}, target));  // inside the wall band
}

TEST(Supervise, RatioControlsSource) {
  const auto ctx = make_scene_context(box_scene(10.0, 5.0));
  Rng rng(8);
  int oracle = 0;
  for (int i = 0; i < 500; ++i) {
    EXPECT_TRUE(supervise(*ctx, {{1, 1}}, {2, 2, 0}, {5, 2}, 1.0, rng).from_oracle);
    EXPECT_FALSE(supervise(*ctx, {{1, 1}}, {2, 2, 0}, {5, 2}, 0.0, rng).from_oracle);
  }
  for (int i = 0; i < 10000; ++i) oracle += supervise(*ctx, {{1, 1}}, {2, 2, 0}, {5, 2}, 0.85, rng).from_oracle;
  EXPECT_NEAR(oracle / 10000.0, 0.85, 0.02);
}

TEST(Supervise, ScheduledRatioDecaysEveryDecayTimeEpochs) {
  const ScheduleParams p;
  EXPECT_DOUBLE_EQ(p.ratio, 0.85);
  EXPECT_EQ(p.decay_time, 4);
  for (int e = 0; e < 4; ++e) EXPECT_DOUBLE_EQ(scheduled_ratio(p, e), 0.85);
  EXPECT_DOUBLE_EQ(scheduled_ratio(p, 4), 0.85 * 0.85);
  EXPECT_DOUBLE_EQ(scheduled_ratio(p, 11), std::pow(0.85, 3));
  EXPECT_THROW(scheduled_ratio(p, -1), Error);
}

class RolloutTest : public ::testing::Test {
 protected:
  SceneContextPtr ctx = make_scene_context(box_scene(12.0, 5.0));
  Episode episode = testing::simple_episode(*ctx, {1.5, 2.5, 0}, {10.0, 2.5});
  SimConfig cfg = [] {
    SimConfig c;
    c.mode = SimMode::kTelHop;
    return c;
  }();
};

TEST_F(RolloutTest, RatioOneReproducesOracleLabels) {
  int calls = 0;
  const CandidatePolicy policy = [&](const Observation&, const std::vector<WorldPoint>&) {
    ++calls;
    return std::optional<std::size_t>(0);
  };
  const SupervisedRollout r = supervised_rollout(ctx, episode, policy, 1.0, 5, cfg);
  ASSERT_FALSE(r.transcript.empty());
  for (const auto& rec : r.transcript) {
    EXPECT_TRUE(rec.supervision.from_oracle);
    EXPECT_EQ(rec.executed_stop, rec.supervision.oracle_stop);
    EXPECT_TRUE(rec.executed_stop ||
                rec.executed_target == rec.supervision.candidates[rec.supervision.oracle_index]);
  }
  EXPECT_TRUE(r.transcript.back().executed_stop);
  EXPECT_EQ(r.trajectory.done_reason, DoneReason::kStopped);
  EXPECT_EQ(score_episode(episode, r.trajectory, *ctx).metrics.SR, 1);
  EXPECT_EQ(calls, static_cast<int>(r.transcript.size()));  // predictions are still logged
}

TEST_F(RolloutTest, RatioZeroFollowsPredictions) {
  // Always the candidate behind the agent, then stop after five hops.
  int calls = 0;
  const CandidatePolicy policy = [&](const Observation&, const std::vector<WorldPoint>& c) -> std::optional<std::size_t> {
    if (++calls > 5) return std::nullopt;
    return c.size() / 2;
  };
  const SupervisedRollout r = supervised_rollout(ctx, episode, policy, 0.0, 5, cfg);
  ASSERT_EQ(r.transcript.size(), 6u);
  for (const auto& rec : r.transcript) {
    EXPECT_FALSE(rec.supervision.from_oracle);
    EXPECT_EQ(rec.executed_stop, !rec.predicted.has_value());
    EXPECT_TRUE(!rec.predicted || rec.executed_target == rec.supervision.candidates[*rec.predicted]);
  }
  // Hops are replayed exactly in the trajectory.
  std::size_t hop = 0;
  for (const auto& a : r.trajectory.actions) {
    if (const auto* w = std::get_if<WaypointHop>(&a)) {
      EXPECT_EQ(w->target, r.transcript[hop++].executed_target);
    }
  }
  EXPECT_EQ(hop, 5u);
  EXPECT_EQ(score_episode(episode, r.trajectory, *ctx).metrics.SR, 0);
}

TEST_F(RolloutTest, NeedsWaypointMode) {
  const CandidatePolicy policy = [](const Observation&, const std::vector<WorldPoint>&) {
    return std::optional<std::size_t>();
  };
  EXPECT_EQ(code_of([&] { supervised_rollout(ctx, episode, policy, 1.0, 1, SimConfig{}); }),
            ErrorCode::kInvalidArgument);
}

TEST_F(RolloutTest, RingCandidatesStayInFreeSpace) {
  const auto c = ring_candidates(*ctx, {0.9, 2.5, 0});
  EXPECT_LT(c.size(), 12u);  // the west wall eats some bearings
  EXPECT_NEAR(distance(c.front(), {1.9, 2.5}), 0.0, 1e-12);
  for (const auto& p : c) EXPECT_TRUE(ctx->agent_grid().free(ctx->agent_grid().locate(p)));
}

TEST(Agents, NamesRoundTrip) {
  for (AgentKind k : {AgentKind::kOracleFollower, AgentKind::kRandom, AgentKind::kGreedy}) {
    EXPECT_EQ(parse_agent_kind(agent_kind_name(k)), k);
  }
  EXPECT_FALSE(parse_agent_kind("expert"));
}

TEST(Agents, RandomStopsRarely) {
  const auto ctx = make_scene_context(box_scene(10.0, 5.0));
  const Episode e = testing::simple_episode(*ctx, {2, 2.5, 0}, {8, 2.5});
  Simulator sim(ctx);
  const Observation obs = sim.reset(e);
  auto agent = make_agent(AgentKind::kRandom);
  agent->reset(e, ctx, {}, 3);
  std::map<std::string, int> counts;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Action a = agent->act(obs);
    const auto* d = std::get_if<DiscreteAction>(&a);
    ASSERT_TRUE(d);
    ++counts[std::string(primitive_name(d->primitive))];
  }
  EXPECT_NEAR(counts["STOP"] / double(n), 0.02, 0.005);
  for (const char* p : {"FORWARD", "TURN_LEFT", "TURN_RIGHT"}) EXPECT_NEAR(counts[p] / double(n), 0.98 / 3, 0.015) << p;
}

TEST(Agents, OracleFollowerAndGreedy) {
  const auto ctx = make_scene_context(box_scene(10.0, 5.0));
  const Episode e = testing::simple_episode(*ctx, {1.5, 1.5, 0}, {8, 3.5});
  auto oracle = make_agent(AgentKind::kOracleFollower);
  const Trajectory t = run_episode(ctx, e, *oracle, {}, 1);
  const EpisodeResult r = score_episode(e, t, *ctx);
  EXPECT_EQ(r.metrics.SR, 1);
  EXPECT_EQ(r.metrics.CR, 0.0);
  EXPECT_LT(r.metrics.NE, 0.5);
  EXPECT_GE(r.metrics.nDTW, 0.95);

  const Episode near = testing::simple_episode(*ctx, {7.5, 3.0, 0}, {8, 3.5});
  auto greedy = make_agent(AgentKind::kGreedy);
  const Trajectory g = run_episode(ctx, near, *greedy, {}, 1);
  EXPECT_EQ(g.actions.size(), 1u);
  EXPECT_TRUE(is_stop(g.actions.front()));
}

}  // namespace
}  // namespace navbench
