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

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "geometry/types.hpp"

namespace navbench {

inline constexpr const char* kHallwayRoomId = "none";

struct Disc {
  WorldPoint center;
  double radius = 0.0;

  friend bool operator==(const Disc&, const Disc&) = default;
};

using Footprint = std::variant<Rect, Disc>;

WorldPoint footprint_center(const Footprint& fp);
Rect footprint_bounds(const Footprint& fp);
double footprint_area(const Footprint& fp);
bool footprint_contains(const Footprint& fp, WorldPoint p);
// True when the footprint overlaps the cell rectangle with positive area.
bool footprint_overlaps(const Footprint& fp, const Rect& cell);
// inner ⊆ outer inflated by `tol` (rectangles grow per axis, discs by radius).
bool footprint_within(const Footprint& inner, const Footprint& outer, double tol);
double footprint_distance(const Footprint& fp, WorldPoint p);

struct Door {
  WorldPoint a;
  WorldPoint b;

  double width() const { return distance(a, b); }
  WorldPoint center() const { return 0.5 * (a + b); }
  friend bool operator==(const Door&, const Door&) = default;
};

struct RoomSpec {
  std::string room_id;
  std::string label;
  Rect footprint;
  std::vector<Door> doors;

  friend bool operator==(const RoomSpec&, const RoomSpec&) = default;
};

struct ObjectSpec {
  std::string object_id;
  std::string label;
  Footprint footprint;
  double base_height = 0.0;
  double top_height = 0.0;
  std::string room_id = kHallwayRoomId;
  bool is_obstacle = true;

  friend bool operator==(const ObjectSpec&, const ObjectSpec&) = default;
};

struct Scene {
  std::string scene_id;
  Rect bounds;
  std::vector<RoomSpec> rooms;
  std::vector<ObjectSpec> objects;

  const RoomSpec* find_room(const std::string& room_id) const;
  const ObjectSpec* find_object(const std::string& object_id) const;
  // First room whose footprint contains p.
  const RoomSpec* room_at(WorldPoint p) const;

  friend bool operator==(const Scene&, const Scene&) = default;
};

// Throws Error(kInvariantViolation) naming the first violated invariant.
// Doors must be at least `min_door_width` wide (the agent diameter).
void validate_scene(const Scene& scene, double min_door_width = 0.60);

// JSON (de)serialization. Parse failures raise kParseError with the line
// and field path; structurally valid files that break an invariant raise
// kInvariantViolation.
std::string scene_to_json(const Scene& scene);
Scene scene_from_json(const std::string& text, const std::string& source = "<string>");
Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);

}  // namespace navbench
