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

#include <algorithm>
#include <set>

#include "common/error.hpp"
#include "env/generator.hpp"
#include "env/occupancy.hpp"
#include "env/scene.hpp"
#include "env/scene_context.hpp"
#include "env/scene_graph.hpp"
#include "geometry/planner.hpp"
#include "tasks/dataset.hpp"
#include "test_support.hpp"

namespace navbench {
namespace {

using testing::box_scene;
using testing::make_object;

Scene two_rooms(bool with_door) {
  Scene s;
  s.scene_id = "two_rooms";
  s.bounds = {{0.0, 0.0}, {8.0, 4.0}};
  RoomSpec a{"room_0", "living room", {{0.0, 0.0}, {4.0, 4.0}}, {}};
  RoomSpec b{"room_1", "kitchen", {{4.0, 0.0}, {8.0, 4.0}}, {}};
  if (with_door) a.doors.push_back({{4.0, 1.5}, {4.0, 2.5}});
  s.rooms = {a, b};
  return s;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

TEST(Occupancy, DoorsConnectRooms) {
  auto open = make_scene_context(two_rooms(true));
  auto closed = make_scene_context(two_rooms(false));
  EXPECT_TRUE(geodesic_distance(open->agent_grid(), {2.0, 2.0}, {6.0, 2.0}));
  EXPECT_TRUE(geodesic_distance(open->nav_grid(), {2.0, 2.0}, {6.0, 2.0}));
  EXPECT_FALSE(geodesic_distance(closed->agent_grid(), {2.0, 2.0}, {6.0, 2.0}));
}

TEST(Occupancy, OverheadObjectsAreNotObstacles) {
  Scene s = box_scene(6.0, 4.0);
  s.objects.push_back(make_object("lamp_0", "ceiling lamp", Disc{{3.0, 2.0}, 0.3}, 2.2, 2.4));
  s.objects.push_back(make_object("table_0", "table", Rect{{1.0, 1.0}, {2.0, 2.0}}, 0.0, 0.75));
  const OccupancyGrid g = build_occupancy(s, 0.05, 1.5);
  EXPECT_TRUE(g.free(g.locate({3.0, 2.0})));
  EXPECT_TRUE(g.occupied(g.locate({1.5, 1.5})));
  // Walls on every edge.
  EXPECT_TRUE(g.occupied(g.locate({0.01, 2.0})));
  EXPECT_TRUE(g.occupied(g.locate({5.99, 2.0})));
  EXPECT_TRUE(g.occupied(g.locate({3.0, 0.01})));
  EXPECT_TRUE(g.occupied(g.locate({3.0, 3.99})));
}

TEST(Occupancy, GridsAreNested) {
  for (const auto& ctx : testing::generated_scenes(5, 3)) {
    const auto& raw = ctx->raw_grid();
    const auto& agent = ctx->agent_grid();
    const auto& nav = ctx->nav_grid();
    for (std::size_t i = 0; i < raw.cell_count(); ++i) {
      const Cell c = raw.cell_at(i);
      EXPECT_TRUE(!raw.occupied(c) || agent.occupied(c));
      EXPECT_TRUE(!agent.occupied(c) || nav.occupied(c));
    }
  }
}

TEST(SceneValidation, RejectsBrokenScenes) {
  Scene s = box_scene(6.0, 4.0);
  s.objects.push_back(make_object("a", "table", Rect{{1, 1}, {2, 2}}, 0.0, 0.7));
  EXPECT_NO_THROW(validate_scene(s));

  Scene dup = s;
  dup.objects.push_back(dup.objects[0]);
  EXPECT_EQ(code_of([&] { validate_scene(dup); }), ErrorCode::kInvariantViolation);

  Scene outside = s;
  outside.objects[0].footprint = Rect{{5.5, 1}, {6.5, 2}};
  EXPECT_EQ(code_of([&] { validate_scene(outside); }), ErrorCode::kInvariantViolation);

  Scene heights = s;
  heights.objects[0].top_height = -1.0;
  EXPECT_EQ(code_of([&] { validate_scene(heights); }), ErrorCode::kInvariantViolation);

  Scene narrow = two_rooms(true);
  narrow.rooms[0].doors[0] = {{4.0, 1.5}, {4.0, 2.0}};
  EXPECT_EQ(code_of([&] { validate_scene(narrow); }), ErrorCode::kInvariantViolation);

  Scene off_wall = two_rooms(true);
  off_wall.rooms[0].doors[0] = {{3.0, 1.5}, {3.0, 2.5}};
  EXPECT_EQ(code_of([&] { validate_scene(off_wall); }), ErrorCode::kInvariantViolation);

  Scene bad_room = s;
  bad_room.objects[0].room_id = "room_9";
  EXPECT_EQ(code_of([&] { validate_scene(bad_room); }), ErrorCode::kInvariantViolation);
}

TEST(SceneJson, RoundTripsGeneratedScenes) {
  for (const Scene& s : generate_scenes(GeneratorParams{}, 10, 99)) {
    const std::string text = scene_to_json(s);
    const Scene back = scene_from_json(text);
    EXPECT_EQ(back, s);
    EXPECT_EQ(scene_to_json(back), text);
  }
}

TEST(SceneJson, ErrorsNameTheSourceAndField) {
  const std::string good = scene_to_json(box_scene(6.0, 4.0));
  try {
    scene_from_json("{\"scene_id\": 3}", "bad.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("bad.json"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("scene_id"), std::string::npos);
  }
  EXPECT_EQ(code_of([&] { scene_from_json(good.substr(0, good.size() / 2), "cut.json"); }), ErrorCode::kParseError);
}

TEST(Generator, DeterministicInSeed) {
  const GeneratorParams p;
  for (std::uint64_t seed : {0ull, 1ull, 12345ull}) {
    EXPECT_EQ(scene_to_json(generate_scene(p, seed, "s")), scene_to_json(generate_scene(p, seed, "s")));
  }
  EXPECT_NE(scene_to_json(generate_scene(p, 1, "s")), scene_to_json(generate_scene(p, 2, "s")));
}

TEST(Generator, ScenesAreValidAndConnected) {
  const GeneratorParams p;
  for (const auto& ctx : testing::generated_scenes(30, 5)) {
    const Scene& s = ctx->scene();
    EXPECT_NO_THROW(validate_scene(s));
    EXPECT_GE(static_cast<int>(s.rooms.size()), p.min_rooms);
    EXPECT_LE(static_cast<int>(s.rooms.size()), p.max_rooms);
    int components = 0;
    label_free_components(ctx->nav_grid(), &components);
    EXPECT_EQ(components, 1) << s.scene_id;
    std::set<std::string> labels(known_object_labels().begin(), known_object_labels().end());
    for (const auto& o : s.objects) EXPECT_TRUE(labels.count(o.label)) << o.label;
  }
}

TEST(Generator, RejectsBadParams) {
  GeneratorParams p;
  p.min_rooms = 5;
  p.max_rooms = 2;
  EXPECT_EQ(code_of([&] { p.validate(); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { generator_params_from_json("{\"min_rooms\": \"x\"}"); }), ErrorCode::kParseError);
}

TEST(SceneGraph, RelationsOnConstructedScene) {
  Scene s = two_rooms(true);
  s.objects.push_back(make_object("table_0", "table", Rect{{1.0, 1.0}, {2.0, 2.0}}, 0.0, 0.75));
  s.objects.push_back(make_object("cup_0", "cup", Disc{{1.5, 1.5}, 0.05}, 0.75, 0.85));
  s.objects.push_back(make_object("chair_0", "chair", Rect{{2.2, 1.2}, {2.7, 1.7}}, 0.0, 0.9));
  s.objects.push_back(make_object("sofa_0", "sofa", Rect{{5.0, 3.0}, {7.0, 3.8}}, 0.0, 0.8, "room_1"));
  const SceneGraph g = build_scene_graph(s);
  EXPECT_TRUE(g.contains({"cup_0", Relation::kOn, "table_0"}));
  EXPECT_FALSE(g.contains({"table_0", Relation::kOn, "cup_0"}));
  EXPECT_TRUE(g.contains({"chair_0", Relation::kNear, "table_0"}));
  EXPECT_TRUE(g.contains({"table_0", Relation::kNear, "chair_0"}));
  EXPECT_FALSE(g.contains({"sofa_0", Relation::kNear, "table_0"}));
  EXPECT_TRUE(g.contains({"sofa_0", Relation::kIn, "room_1"}));
  EXPECT_TRUE(g.contains({"cup_0", Relation::kIn, "room_0"}));
  EXPECT_EQ((SceneEdge{"cup_0", Relation::kOn, "table_0"}.id()), "cup_0|ON|table_0");
  EXPECT_TRUE(std::is_sorted(g.edges.begin(), g.edges.end(), [](const SceneEdge& a, const SceneEdge& b) {
    return std::tie(a.subject, a.relation, a.object) < std::tie(b.subject, b.relation, b.object);
  }));
}

TEST(SceneGraph, EdgesMatchPairwisePredicates) {
  for (const auto& ctx : testing::generated_scenes(10, 21)) {
    const Scene& s = ctx->scene();
    const SceneGraph& g = ctx->graph();
    std::size_t expected = 0;
    for (const auto& a : s.objects) {
      for (const auto& b : s.objects) {
        const bool on = relation_on(a, b, {});
        const bool near = relation_near(a, b, {});
        expected += on + near;
        EXPECT_EQ(g.contains({a.object_id, Relation::kOn, b.object_id}), on);
        EXPECT_EQ(g.contains({a.object_id, Relation::kNear, b.object_id}), near);
        // NEAR is symmetric.
        EXPECT_EQ(near, relation_near(b, a, {}));
      }
      for (const auto& r : s.rooms) {
        const bool in = relation_in(a, r);
        expected += in;
        EXPECT_EQ(g.contains({a.object_id, Relation::kIn, r.room_id}), in);
      }
    }
    EXPECT_EQ(g.edges.size(), expected);
  }
}

TEST(SceneDir, WriteAndLoadRoundTrip) {
  testing::TempDir tmp;
  const GeneratorParams p;
  const auto scenes = generate_scenes(p, 4, 7);
  write_scene_dir(scenes, p, 7, tmp.str("scenes"));
  const auto loaded = load_scene_dir(tmp.str("scenes"));
  ASSERT_EQ(loaded.size(), scenes.size());
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    EXPECT_EQ(loaded[i]->scene(), scenes[i]);
    EXPECT_EQ(loaded[i]->agent().radius, p.agent.radius);
    EXPECT_NEAR(loaded[i]->nav_params().margin(), p.nav.margin(), 1e-15);
  }
  EXPECT_EQ(code_of([&] { load_scene_dir(tmp.str("missing")); }), ErrorCode::kIoError);
}

}  // namespace
}  // namespace navbench
