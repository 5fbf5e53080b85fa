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
#include <string_view>
#include <vector>

#include "env/scene.hpp"

namespace navbench {

enum class Relation { kOn, kNear, kIn };

std::string_view relation_name(Relation r);

struct SceneEdge {
  std::string subject;
  Relation relation;
  std::string object;

  // Stable identifier, e.g. "cup_1|ON|table_0".
  std::string id() const;
  friend bool operator==(const SceneEdge&, const SceneEdge&) = default;
};

struct SceneGraphParams {
  double near_threshold = 1.5;
  double on_tolerance = 0.05;
};

struct SceneGraph {
  std::vector<std::string> nodes;  // object ids then room ids, each sorted
  std::vector<SceneEdge> edges;    // sorted by (subject, relation, object)

  std::vector<const SceneEdge*> edges_from(const std::string& subject) const;
  bool contains(const SceneEdge& e) const;
};

// Edge predicates; exposed so tests can evaluate them pairwise.
bool relation_on(const ObjectSpec& a, const ObjectSpec& b, const SceneGraphParams& p);
bool relation_near(const ObjectSpec& a, const ObjectSpec& b, const SceneGraphParams& p);
bool relation_in(const ObjectSpec& a, const RoomSpec& room);

SceneGraph build_scene_graph(const Scene& scene, const SceneGraphParams& params = {});

}  // namespace navbench
