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

#include <cstdint>
#include <string>
#include <vector>

#include "env/scene.hpp"
#include "env/scene_context.hpp"

namespace navbench {

struct GeneratorParams {
  int min_rooms = 2;
  int max_rooms = 8;
  double min_room_area = 10.0;  // m^2, per room before splitting
  double max_room_area = 22.0;
  double min_room_side = 2.6;
  double min_aspect = 1.0;  // bounds width / height
  double max_aspect = 1.6;
  double min_density = 0.04;  // furniture pieces per m^2 of room
  double max_density = 0.10;
  double door_width = 1.0;
  double furniture_gap = 0.9;  // clearance kept between pieces of furniture
  int max_attempts = 60;
  // Extra labels mixed into the non-primary rooms; empty uses the built-in set.
  std::vector<std::string> room_labels;
  AgentBody agent;
  NavigationParams nav;

  void validate() const;
};

GeneratorParams generator_params_from_json(const std::string& text);

// Shared-wall rectangular floor plan with doors and furnished rooms. Every
// room is reachable from every other on the navigation grid. Deterministic in
// (params, seed). Throws kGenerationFailed after params.max_attempts.
Scene generate_scene(const GeneratorParams& params, std::uint64_t seed, std::string scene_id = "");

// `count` scenes named scene_000, scene_001, ...; scene i is generated from
// mix_seed(seed, i).
std::vector<Scene> generate_scenes(const GeneratorParams& params, int count, std::uint64_t seed);

// Labels the generator can emit; the instruction validator uses them as the
// landmark vocabulary.
const std::vector<std::string>& known_object_labels();
const std::vector<std::string>& known_room_labels();

}  // namespace navbench
