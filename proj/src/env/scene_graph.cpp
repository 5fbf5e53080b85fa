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

#include "env/scene_graph.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace navbench {

std::string_view relation_name(Relation r) {
  switch (r) {
    case Relation::kOn: return "ON";
    case Relation::kNear: return "NEAR";
    case Relation::kIn: return "IN";
  }
  return "?";
}

std::string SceneEdge::id() const {
  return subject + "|" + std::string(relation_name(relation)) + "|" + object;
}

std::vector<const SceneEdge*> SceneGraph::edges_from(const std::string& subject) const {
  std::vector<const SceneEdge*> out;
  for (const auto& e : edges) {
    if (e.subject == subject) out.push_back(&e);
  }
  return out;
}

bool SceneGraph::contains(const SceneEdge& e) const {
  return std::find(edges.begin(), edges.end(), e) != edges.end();
}

bool relation_on(const ObjectSpec& a, const ObjectSpec& b, const SceneGraphParams& p) {
  if (a.object_id == b.object_id) return false;
  return footprint_within(a.footprint, b.footprint, p.on_tolerance) &&
         std::abs(a.base_height - b.top_height) <= p.on_tolerance + 1e-12;
}

bool relation_near(const ObjectSpec& a, const ObjectSpec& b, const SceneGraphParams& p) {
  if (a.object_id == b.object_id || a.room_id != b.room_id) return false;
  return distance(footprint_center(a.footprint), footprint_center(b.footprint)) <= p.near_threshold;
}

bool relation_in(const ObjectSpec& a, const RoomSpec& room) {
  return room.footprint.contains(footprint_center(a.footprint));
}

SceneGraph build_scene_graph(const Scene& scene, const SceneGraphParams& params) {
  SceneGraph graph;
  for (const auto& o : scene.objects) graph.nodes.push_back(o.object_id);
  std::sort(graph.nodes.begin(), graph.nodes.end());
  std::vector<std::string> rooms;
  for (const auto& r : scene.rooms) rooms.push_back(r.room_id);
  std::sort(rooms.begin(), rooms.end());
  graph.nodes.insert(graph.nodes.end(), rooms.begin(), rooms.end());

  for (const auto& a : scene.objects) {
    for (const auto& b : scene.objects) {
      if (relation_on(a, b, params)) graph.edges.push_back({a.object_id, Relation::kOn, b.object_id});
      if (relation_near(a, b, params)) graph.edges.push_back({a.object_id, Relation::kNear, b.object_id});
    }
    for (const auto& room : scene.rooms) {
      if (relation_in(a, room)) graph.edges.push_back({a.object_id, Relation::kIn, room.room_id});
    }
  }
  std::sort(graph.edges.begin(), graph.edges.end(), [](const SceneEdge& x, const SceneEdge& y) {
    return std::tie(x.subject, x.relation, x.object) < std::tie(y.subject, y.relation, y.object);
  });
  return graph;
}

}  // namespace navbench
