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

#include "env/scene.hpp"

#include <cmath>
#include <set>

#include "common/error.hpp"
#include "common/json_util.hpp"

namespace navbench {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kGeomTol = 1e-6;

[[noreturn]] void violation(const std::string& what) {
  throw Error(ErrorCode::kInvariantViolation, what);
}

bool door_on_boundary(const Door& d, const Rect& r) {
  const bool horizontal = std::abs(d.a.y - d.b.y) < kGeomTol;
  const bool vertical = std::abs(d.a.x - d.b.x) < kGeomTol;
  if (horizontal) {
    const bool on_edge = std::abs(d.a.y - r.min.y) < kGeomTol || std::abs(d.a.y - r.max.y) < kGeomTol;
    return on_edge && std::min(d.a.x, d.b.x) >= r.min.x - kGeomTol &&
           std::max(d.a.x, d.b.x) <= r.max.x + kGeomTol;
  }
  if (vertical) {
    const bool on_edge = std::abs(d.a.x - r.min.x) < kGeomTol || std::abs(d.a.x - r.max.x) < kGeomTol;
    return on_edge && std::min(d.a.y, d.b.y) >= r.min.y - kGeomTol &&
           std::max(d.a.y, d.b.y) <= r.max.y + kGeomTol;
  }
  return false;
}

Json rect_to_json(const Rect& r) {
  Json j;
  j["min"] = point_to_json(r.min);
  j["max"] = point_to_json(r.max);
  return j;
}

Rect rect_from_json(const JsonReader& j) {
  return {j.field("min").point(), j.field("max").point()};
}

Json footprint_to_json(const Footprint& fp) {
  return std::visit(Overloaded{
                        [](const Rect& r) {
                          Json j;
                          j["kind"] = "rect";
                          j["min"] = point_to_json(r.min);
                          j["max"] = point_to_json(r.max);
                          return j;
                        },
                        [](const Disc& d) {
                          Json j;
                          j["kind"] = "disc";
                          j["center"] = point_to_json(d.center);
                          j["radius"] = d.radius;
                          return j;
                        },
                    },
                    fp);
}

Footprint footprint_from_json(const JsonReader& j) {
  const std::string kind = j.field("kind").string();
  if (kind == "rect") return rect_from_json(j);
  if (kind == "disc") return Disc{j.field("center").point(), j.field("radius").number()};
  j.field("kind").fail("expected \"rect\" or \"disc\", got \"" + kind + "\"");
}

}  // namespace

WorldPoint footprint_center(const Footprint& fp) {
  return std::visit(Overloaded{[](const Rect& r) { return r.center(); },
                               [](const Disc& d) { return d.center; }},
                    fp);
}

Rect footprint_bounds(const Footprint& fp) {
  return std::visit(Overloaded{[](const Rect& r) { return r; },
                               [](const Disc& d) {
                                 return Rect{{d.center.x - d.radius, d.center.y - d.radius},
                                             {d.center.x + d.radius, d.center.y + d.radius}};
                               }},
                    fp);
}

double footprint_area(const Footprint& fp) {
  return std::visit(Overloaded{[](const Rect& r) { return r.area(); },
                               [](const Disc& d) { return std::numbers::pi * d.radius * d.radius; }},
                    fp);
}

bool footprint_contains(const Footprint& fp, WorldPoint p) {
  return std::visit(Overloaded{[&](const Rect& r) { return r.contains(p); },
                               [&](const Disc& d) { return distance(d.center, p) <= d.radius; }},
                    fp);
}

bool footprint_overlaps(const Footprint& fp, const Rect& cell) {
  return std::visit(Overloaded{[&](const Rect& r) { return overlaps_strictly(r, cell); },
                               [&](const Disc& d) { return distance(cell, d.center) < d.radius; }},
                    fp);
}

double footprint_distance(const Footprint& fp, WorldPoint p) {
  return std::visit(
      Overloaded{[&](const Rect& r) { return distance(r, p); },
                 [&](const Disc& d) { return std::max(0.0, distance(d.center, p) - d.radius); }},
      fp);
}

bool footprint_within(const Footprint& inner, const Footprint& outer, double tol) {
  return std::visit(
      Overloaded{
          [&](const Rect& in, const Rect& out) { return out.inflated(tol).contains(in); },
          [&](const Disc& in, const Rect& out) {
            return out.inflated(tol).contains(footprint_bounds(in));
          },
          [&](const Rect& in, const Disc& out) {
            const WorldPoint corners[4] = {in.min, {in.max.x, in.min.y}, in.max, {in.min.x, in.max.y}};
            for (const auto& c : corners) {
              if (distance(c, out.center) > out.radius + tol) return false;
            }
            return true;
          },
          [&](const Disc& in, const Disc& out) {
            return distance(in.center, out.center) + in.radius <= out.radius + tol;
          },
      },
      inner, outer);
}

const RoomSpec* Scene::find_room(const std::string& room_id) const {
  for (const auto& r : rooms) {
    if (r.room_id == room_id) return &r;
  }
  return nullptr;
}

const ObjectSpec* Scene::find_object(const std::string& object_id) const {
  for (const auto& o : objects) {
    if (o.object_id == object_id) return &o;
  }
  return nullptr;
}

const RoomSpec* Scene::room_at(WorldPoint p) const {
  for (const auto& r : rooms) {
    if (r.footprint.contains(p)) return &r;
  }
  return nullptr;
}

void validate_scene(const Scene& scene, double min_door_width) {
  if (scene.scene_id.empty()) violation("scene_id must be non-empty");
  if (!(scene.bounds.area() > 0.0)) violation("scene bounds must have positive area");
  std::set<std::string> room_ids;
  for (const auto& room : scene.rooms) {
    if (room.room_id.empty() || room.room_id == kHallwayRoomId) {
      violation("room_id '" + room.room_id + "' is reserved or empty");
    }
    if (!room_ids.insert(room.room_id).second) violation("duplicate room_id '" + room.room_id + "'");
    if (!(room.footprint.area() > 0.0)) violation("room '" + room.room_id + "' footprint area must be > 0");
    if (!scene.bounds.contains(room.footprint, kGeomTol)) {
      violation("room '" + room.room_id + "' footprint lies outside scene bounds");
    }
    for (const auto& door : room.doors) {
      if (!door_on_boundary(door, room.footprint)) {
        violation("door of room '" + room.room_id + "' does not lie on the footprint boundary");
      }
      if (door.width() + kGeomTol < min_door_width) {
        violation("door of room '" + room.room_id + "' is narrower than the agent diameter");
      }
    }
  }
  std::set<std::string> object_ids;
  for (const auto& obj : scene.objects) {
    if (obj.object_id.empty()) violation("object_id must be non-empty");
    if (!object_ids.insert(obj.object_id).second) {
      violation("duplicate object_id '" + obj.object_id + "'");
    }
    if (!(footprint_area(obj.footprint) > 0.0)) {
      violation("object '" + obj.object_id + "' footprint area must be > 0");
    }
    if (!scene.bounds.contains(footprint_bounds(obj.footprint), kGeomTol)) {
      violation("object '" + obj.object_id + "' footprint lies outside scene bounds");
    }
    if (!(obj.base_height >= 0.0) || !(obj.top_height >= obj.base_height)) {
      violation("object '" + obj.object_id + "' must satisfy top_height >= base_height >= 0");
    }
    if (obj.room_id != kHallwayRoomId && !room_ids.count(obj.room_id)) {
      violation("object '" + obj.object_id + "' references unknown room '" + obj.room_id + "'");
    }
  }
}

std::string scene_to_json(const Scene& scene) {
  Json j;
  j["scene_id"] = scene.scene_id;
  j["bounds"] = rect_to_json(scene.bounds);
  j["rooms"] = Json::array();
  for (const auto& room : scene.rooms) {
    Json r;
    r["room_id"] = room.room_id;
    r["label"] = room.label;
    r["footprint"] = rect_to_json(room.footprint);
    r["doors"] = Json::array();
    for (const auto& d : room.doors) {
      r["doors"].push_back(Json::array({point_to_json(d.a), point_to_json(d.b)}));
    }
    j["rooms"].push_back(std::move(r));
  }
  j["objects"] = Json::array();
  for (const auto& obj : scene.objects) {
    Json o;
    o["object_id"] = obj.object_id;
    o["label"] = obj.label;
    o["footprint"] = footprint_to_json(obj.footprint);
    o["base_height"] = obj.base_height;
    o["top_height"] = obj.top_height;
    o["room_id"] = obj.room_id;
    o["is_obstacle"] = obj.is_obstacle;
    j["objects"].push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

static Scene scene_from_document(const Json& doc) {
  const JsonReader root(doc, "");
  Scene scene;
  scene.scene_id = root.field("scene_id").string();
  scene.bounds = rect_from_json(root.field("bounds"));
  for (const auto& r : root.field("rooms").array()) {
    RoomSpec room;
    room.room_id = r.field("room_id").string();
    room.label = r.field("label").string();
    room.footprint = rect_from_json(r.field("footprint"));
    for (const auto& d : r.field("doors").array()) {
      auto ends = d.array();
      if (ends.size() != 2) d.fail("expected [p0, p1]");
      room.doors.push_back({ends[0].point(), ends[1].point()});
    }
    scene.rooms.push_back(std::move(room));
  }
  for (const auto& o : root.field("objects").array()) {
    ObjectSpec obj;
    obj.object_id = o.field("object_id").string();
    obj.label = o.field("label").string();
    obj.footprint = footprint_from_json(o.field("footprint"));
    obj.base_height = o.field("base_height").number();
    obj.top_height = o.field("top_height").number();
    obj.room_id = o.field("room_id").string();
    obj.is_obstacle = o.field("is_obstacle").boolean();
    scene.objects.push_back(std::move(obj));
  }
  validate_scene(scene);
  return scene;
}

Scene scene_from_json(const std::string& text, const std::string& source) {
  const Json doc = parse_json(text, source);
  try {
    return scene_from_document(doc);
  } catch (const Error& e) {
    throw Error(e.code(), source + ": " + e.what());
  }
}

Scene load_scene(const std::string& path) { return scene_from_json(read_text_file(path), path); }

void save_scene(const Scene& scene, const std::string& path) {
  validate_scene(scene);
  write_text_file(path, scene_to_json(scene));
}

}  // namespace navbench
