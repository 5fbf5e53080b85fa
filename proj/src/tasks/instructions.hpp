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

#include <span>
#include <string>
#include <vector>

#include "env/scene.hpp"
#include "env/scene_graph.hpp"
#include "geometry/planner.hpp"
#include "tasks/episode.hpp"

namespace navbench {

inline constexpr double kLandmarkRadius = 2.0;
inline constexpr double kTurnSplitAngle = 0.7853981633974483;  // 45 degrees

// Douglas-Peucker simplification; endpoints are always kept.
std::vector<WorldPoint> simplify_polyline(std::span<const WorldPoint> points, double tolerance);

// Second-person step-by-step directions for a reference path: one clause per
// stretch between heading changes of at least 45 degrees, each naming the
// closest landmark within 2 m and the side it is on, then a closing
// "Stop near the <label>." clause.
std::string make_fine_instruction(const PlannedPath& path, const SceneGraph& graph, const Scene& scene);

struct FineCheck {
  bool landmark = false;
  bool spatial_term = false;
  bool action_verb = false;
  bool end_clause = false;
  bool forbidden = false;  // third-person verb or backward motion

  bool ok() const { return landmark && spatial_term && action_verb && end_clause && !forbidden; }
};

// Lexical check against fixed vocabularies.
FineCheck check_fine_instruction(const std::string& text);

// The relation used to describe where a target sits.
struct TargetRelation {
  std::string phrase;  // "on", "near", ... or empty when only the room is known
  std::string reference_label;
  std::string reference_id;
  std::string room_label;
  std::string target_label;
};

// Picks ON over NEAR (closest partner) over room membership.
TargetRelation describe_target(const ObjectSpec& target, const SceneGraph& graph, const Scene& scene);

CoarseInstructions render_coarse(const TargetRelation& rel);
CoarseInstructions make_coarse_instructions(const ObjectSpec& target, const SceneGraph& graph, const Scene& scene);

// Relation phrases accepted from external captions.
const std::vector<std::string>& relation_phrases();

}  // namespace navbench
