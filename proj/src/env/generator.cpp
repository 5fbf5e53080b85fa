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

#include "env/generator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>

#include "common/error.hpp"
#include "common/json_util.hpp"
#include "common/rng.hpp"
#include "geometry/planner.hpp"

namespace navbench {
namespace {

struct FurnitureKind {
  const char* label;
  double width;  // along the wall
  double depth;
  double height;
  bool disc;
  bool support;  // small items may rest on it
};

struct SmallItem {
  const char* label;
  double size;
  double height;
};

const std::map<std::string, std::vector<FurnitureKind>>& catalog() {
  static const std::map<std::string, std::vector<FurnitureKind>> kCatalog = {
      {"living room",
       {{"couch", 2.0, 0.9, 0.8, false, false},
        {"coffee table", 1.0, 0.6, 0.45, false, true},
        {"tv stand", 1.5, 0.4, 0.6, false, true},
        {"armchair", 0.8, 0.8, 0.9, false, false},
        {"plant", 0.5, 0.5, 1.2, true, false}}},
      {"bedroom",
       {{"bed", 2.0, 1.6, 0.6, false, false},
        {"nightstand", 0.5, 0.5, 0.6, false, true},
        {"wardrobe", 1.2, 0.6, 2.0, false, false},
        {"desk", 1.2, 0.6, 0.75, false, true}}},
      {"kitchen",
       {{"counter", 2.0, 0.6, 0.9, false, true},
        {"table", 1.2, 0.8, 0.75, false, true},
        {"fridge", 0.8, 0.7, 1.8, false, false},
        {"chair", 0.5, 0.5, 0.9, true, false}}},
      {"bathroom",
       {{"toilet", 0.5, 0.7, 0.8, false, false},
        {"sink", 0.6, 0.5, 0.9, false, true},
        {"bathtub", 1.7, 0.75, 0.6, false, false}}},
      {"dining room",
       {{"dining table", 1.8, 1.0, 0.75, false, true},
        {"cabinet", 1.0, 0.45, 1.2, false, true},
        {"chair", 0.5, 0.5, 0.9, true, false}}},
      {"office",
       {{"desk", 1.4, 0.7, 0.75, false, true},
        {"bookshelf", 1.0, 0.35, 1.9, false, false},
        {"chair", 0.5, 0.5, 0.9, true, false},
        {"plant", 0.5, 0.5, 1.2, true, false}}},
  };
  return kCatalog;
}

const std::vector<SmallItem>& small_items() {
  static const std::vector<SmallItem> kItems = {
      {"cup", 0.1, 0.12}, {"book", 0.25, 0.05}, {"vase", 0.2, 0.35},
      {"lamp", 0.3, 0.5}, {"laptop", 0.35, 0.03}, {"plate", 0.25, 0.03},
  };
  return kItems;
}

constexpr const char* kPrimaryRoom = "living room";
constexpr double kWallOffset = 0.06;     // furniture sits this far off the wall line
constexpr double kCornerMargin = 0.4;    // door jamb distance from room corners
constexpr double kCeilingLampBase = 2.2;

double snap(double v, double step) { return std::round(v / step) * step; }
double round2(double v) { return std::round(v * 100.0) / 100.0; }

struct Adjacency {
  std::size_t a;
  std::size_t b;
  bool vertical;  // shared edge is vertical (x = const)
  double line;    // x (vertical) or y (horizontal) of the shared edge
  double lo;
  double hi;
};

class SceneBuilder {
 public:
  SceneBuilder(const GeneratorParams& params, Rng& rng) : p_(params), rng_(rng) {}

  std::optional<std::vector<Rect>> layout(Rect* bounds_out) {
    const int n = static_cast<int>(rng_.uniform_int(p_.min_rooms, p_.max_rooms));
    double area = 0.0;
    for (int i = 0; i < n; ++i) area += rng_.uniform(p_.min_room_area, p_.max_room_area);
    const double aspect = rng_.uniform(p_.min_aspect, p_.max_aspect);
    double w = snap(std::sqrt(area * aspect), 0.1);
    double h = snap(area / w, 0.1);
    w = std::max(w, 2.0 * p_.min_room_side + 0.1);
    h = std::max(h, p_.min_room_side + 0.1);
    const Rect bounds{{0.0, 0.0}, {round2(w), round2(h)}};
    *bounds_out = bounds;

    std::vector<Rect> rooms{bounds};
    while (static_cast<int>(rooms.size()) < n) {
      std::optional<std::size_t> pick;
      for (std::size_t i = 0; i < rooms.size(); ++i) {
        const double longer = std::max(rooms[i].width(), rooms[i].height());
        if (longer < 2.0 * p_.min_room_side) continue;
        if (!pick || rooms[i].area() > rooms[*pick].area()) pick = i;
      }
      if (!pick) return std::nullopt;
      const Rect r = rooms[*pick];
      const bool split_x = r.width() >= r.height();
      const double lo = split_x ? r.min.x : r.min.y;
      const double hi = split_x ? r.max.x : r.max.y;
      double cut = snap(lo + (hi - lo) * rng_.uniform(0.35, 0.65), 0.1);
      cut = std::clamp(cut, lo + p_.min_room_side, hi - p_.min_room_side);
      cut = round2(cut);
      Rect first = r, second = r;
      if (split_x) {
        first.max.x = cut;
        second.min.x = cut;
      } else {
        first.max.y = cut;
        second.min.y = cut;
      }
      rooms[*pick] = first;
      rooms.push_back(second);
    }
    return rooms;
  }

  std::vector<Adjacency> adjacencies(const std::vector<Rect>& rooms) const {
    std::vector<Adjacency> out;
    const double need = p_.door_width + 2.0 * kCornerMargin;
    for (std::size_t i = 0; i < rooms.size(); ++i) {
      for (std::size_t j = i + 1; j < rooms.size(); ++j) {
        const Rect& a = rooms[i];
        const Rect& b = rooms[j];
        for (int flip = 0; flip < 2; ++flip) {
          const Rect& l = flip ? b : a;
          const Rect& r = flip ? a : b;
          if (std::abs(l.max.x - r.min.x) < 1e-6) {
            const double lo = std::max(l.min.y, r.min.y), hi = std::min(l.max.y, r.max.y);
            if (hi - lo >= need) out.push_back({i, j, true, l.max.x, lo, hi});
          }
          if (std::abs(l.max.y - r.min.y) < 1e-6) {
            const double lo = std::max(l.min.x, r.min.x), hi = std::min(l.max.x, r.max.x);
            if (hi - lo >= need) out.push_back({i, j, false, l.max.y, lo, hi});
          }
        }
      }
    }
    return out;
  }

  // Spanning tree of doors plus a few loops; false if the rooms cannot all be joined.
  bool place_doors(std::vector<RoomSpec>& rooms, const std::vector<Adjacency>& adj) {
    std::vector<std::size_t> order(adj.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng_.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
    }
    std::vector<std::size_t> parent(rooms.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::size_t joined = 1;
    for (std::size_t k : order) {
      const Adjacency& e = adj[k];
      const std::size_t ra = find(e.a), rb = find(e.b);
      const bool tree_edge = ra != rb;
      if (!tree_edge && !rng_.bernoulli(0.25)) continue;
      if (tree_edge) {
        parent[ra] = rb;
        ++joined;
      }
      const double half = 0.5 * p_.door_width;
      const double c_lo = e.lo + kCornerMargin + half;
      const double c_hi = e.hi - kCornerMargin - half;
      const double c = round2(std::clamp(snap(rng_.uniform(c_lo, c_hi), 0.05), c_lo, c_hi));
      Door door = e.vertical ? Door{{e.line, round2(c - half)}, {e.line, round2(c + half)}}
                             : Door{{round2(c - half), e.line}, {round2(c + half), e.line}};
      rooms[e.a].doors.push_back(door);
    }
    return joined == rooms.size();
  }

  std::vector<ObjectSpec> furnish(const std::vector<RoomSpec>& rooms) {
    std::vector<ObjectSpec> objects;
    std::map<std::string, int> counters;
    auto next_id = [&](const std::string& label) {
      std::string base = label;
      std::replace(base.begin(), base.end(), ' ', '_');
      return base + "_" + std::to_string(counters[base]++);
    };
    std::vector<Door> all_doors;
    for (const auto& r : rooms) all_doors.insert(all_doors.end(), r.doors.begin(), r.doors.end());

    for (const auto& room : rooms) {
      const auto& kinds = catalog().at(room.label);
      const Rect& f = room.footprint;
      const double density = rng_.uniform(p_.min_density, p_.max_density);
      const int count = std::max(1, static_cast<int>(std::lround(f.area() * density)));
      std::vector<ObjectSpec> placed;
      for (int item = 0; item < count; ++item) {
        const FurnitureKind& kind = kinds[static_cast<std::size_t>(rng_.uniform_int(0, static_cast<std::int64_t>(kinds.size()) - 1))];
        for (int attempt = 0; attempt < 30; ++attempt) {
          auto fp = propose(kind, f);
          if (!fp) continue;
          if (!admissible(*fp, f, placed, all_doors)) continue;
          ObjectSpec obj;
          obj.object_id = next_id(kind.label);
          obj.label = kind.label;
          obj.footprint = *fp;
          obj.base_height = 0.0;
          obj.top_height = kind.height;
          obj.room_id = room.room_id;
          obj.is_obstacle = true;
          placed.push_back(obj);
          if (kind.support && rng_.bernoulli(0.6)) {
            const SmallItem& s = small_items()[static_cast<std::size_t>(rng_.uniform_int(0, static_cast<std::int64_t>(small_items().size()) - 1))];
            const Rect sb = footprint_bounds(*fp);
            const double half = 0.5 * std::min({s.size, sb.width() - 0.02, sb.height() - 0.02});
            const double cx = round2(rng_.uniform(sb.min.x + half + 0.01, sb.max.x - half - 0.01));
            const double cy = round2(rng_.uniform(sb.min.y + half + 0.01, sb.max.y - half - 0.01));
            ObjectSpec small;
            small.object_id = next_id(s.label);
            small.label = s.label;
            small.footprint = Rect{{round2(cx - half), round2(cy - half)}, {round2(cx + half), round2(cy + half)}};
            small.base_height = kind.height;
            small.top_height = round2(kind.height + s.height);
            small.room_id = room.room_id;
            small.is_obstacle = true;
            placed.push_back(small);
          }
          break;
        }
      }
      if (rng_.bernoulli(0.4)) {
        ObjectSpec lamp;
        lamp.object_id = next_id("ceiling lamp");
        lamp.label = "ceiling lamp";
        lamp.footprint = Disc{{round2(f.center().x), round2(f.center().y)}, 0.25};
        lamp.base_height = kCeilingLampBase;
        lamp.top_height = 2.4;
        lamp.room_id = room.room_id;
        lamp.is_obstacle = true;
        placed.push_back(lamp);
      }
      objects.insert(objects.end(), placed.begin(), placed.end());
    }
    return objects;
  }

 private:
  std::optional<Footprint> propose(const FurnitureKind& kind, const Rect& room) {
    const bool against_wall = !kind.disc && rng_.bernoulli(0.7);
    if (kind.disc) {
      const double r = 0.5 * kind.width;
      const double m = r + kWallOffset;
      if (room.width() < 2 * m || room.height() < 2 * m) return std::nullopt;
      return Disc{{round2(rng_.uniform(room.min.x + m, room.max.x - m)),
                   round2(rng_.uniform(room.min.y + m, room.max.y - m))},
                  r};
    }
    if (against_wall) {
      const int side = static_cast<int>(rng_.uniform_int(0, 3));  // 0 bottom, 1 top, 2 left, 3 right
      const bool horizontal_wall = side < 2;
      const double along = kind.width, across = kind.depth;
      const double span_lo = (horizontal_wall ? room.min.x : room.min.y) + kWallOffset;
      const double span_hi = (horizontal_wall ? room.max.x : room.max.y) - kWallOffset;
      if (span_hi - span_lo < along) return std::nullopt;
      const double s0 = round2(rng_.uniform(span_lo, span_hi - along));
      Rect r;
      if (horizontal_wall) {
        const double y0 = side == 0 ? room.min.y + kWallOffset : room.max.y - kWallOffset - across;
        r = {{s0, round2(y0)}, {round2(s0 + along), round2(y0 + across)}};
      } else {
        const double x0 = side == 2 ? room.min.x + kWallOffset : room.max.x - kWallOffset - across;
        r = {{round2(x0), s0}, {round2(x0 + across), round2(s0 + along)}};
      }
      return r;
    }
    const bool rotate = rng_.bernoulli(0.5);
    const double w = rotate ? kind.depth : kind.width;
    const double h = rotate ? kind.width : kind.depth;
    const double m = p_.furniture_gap + kWallOffset;
    if (room.width() < w + 2 * m || room.height() < h + 2 * m) return std::nullopt;
    const double x0 = round2(rng_.uniform(room.min.x + m, room.max.x - m - w));
    const double y0 = round2(rng_.uniform(room.min.y + m, room.max.y - m - h));
    return Rect{{x0, y0}, {round2(x0 + w), round2(y0 + h)}};
  }

  bool admissible(const Footprint& fp, const Rect& room, const std::vector<ObjectSpec>& placed,
                  const std::vector<Door>& doors) const {
    const Rect b = footprint_bounds(fp);
    if (!room.inflated(-kWallOffset + 1e-9).contains(b)) return false;
    // Each wall is either hugged or left far enough away to walk past.
    const double wall_gaps[4] = {b.min.x - room.min.x, room.max.x - b.max.x, b.min.y - room.min.y,
                                 room.max.y - b.max.y};
    for (double gap : wall_gaps) {
      if (gap > kWallOffset + 0.02 && gap < p_.furniture_gap) return false;
    }
    for (const auto& other : placed) {
      if (other.base_height > 0.0) continue;
      if (distance(footprint_bounds(other.footprint), b) < p_.furniture_gap) return false;
    }
    for (const auto& d : doors) {
      if (distance(b, d.center()) < 0.5 * p_.door_width + p_.furniture_gap) return false;
    }
    return true;
  }

  const GeneratorParams& p_;
  Rng& rng_;
};

bool rooms_connected(const Scene& scene, const GeneratorParams& p) {
  const SceneContext ctx(scene, p.agent, p.nav);
  const OccupancyGrid& nav = ctx.nav_grid();
  int count = 0;
  const auto labels = label_free_components(nav, &count);
  if (count == 0) return false;
  std::vector<std::size_t> sizes(static_cast<std::size_t>(count), 0);
  for (int l : labels) {
    if (l >= 0) ++sizes[static_cast<std::size_t>(l)];
  }
  const int main = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  for (const auto& room : scene.rooms) {
    bool touches = false;
    for (std::size_t i = 0; i < labels.size() && !touches; ++i) {
      if (labels[i] != main) continue;
      touches = room.footprint.contains(nav.cell_center(nav.cell_at(i)));
    }
    if (!touches) return false;
  }
  return true;
}

}  // namespace

const std::vector<std::string>& known_object_labels() {
  static const std::vector<std::string> kLabels = [] {
    std::vector<std::string> out;
    for (const auto& [room, kinds] : catalog()) {
      for (const auto& k : kinds) out.emplace_back(k.label);
    }
    for (const auto& s : small_items()) out.emplace_back(s.label);
    out.emplace_back("ceiling lamp");
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }();
  return kLabels;
}

const std::vector<std::string>& known_room_labels() {
  static const std::vector<std::string> kLabels = [] {
    std::vector<std::string> out;
    for (const auto& [room, kinds] : catalog()) out.push_back(room);
    return out;
  }();
  return kLabels;
}

void GeneratorParams::validate() const {
  if (min_rooms < 1 || max_rooms < min_rooms) {
    throw Error(ErrorCode::kInvalidArgument, "room count range must satisfy 1 <= min <= max");
  }
  if (!(min_room_area > 0.0) || max_room_area < min_room_area || !(min_room_side > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "room area range must be positive and ordered");
  }
  if (!(min_density >= 0.0) || max_density < min_density) {
    throw Error(ErrorCode::kInvalidArgument, "object density range must be non-negative and ordered");
  }
  if (door_width < 2.0 * agent.radius) {
    throw Error(ErrorCode::kInvalidArgument, "door width must be at least the agent diameter");
  }
  if (!(min_aspect > 0.0) || max_aspect < min_aspect) {
    throw Error(ErrorCode::kInvalidArgument, "aspect range must be positive and ordered");
  }
  for (const auto& label : room_labels) {
    if (!catalog().count(label)) {
      throw Error(ErrorCode::kInvalidArgument, "unknown room label '" + label + "'");
    }
  }
  agent.validate();
}

GeneratorParams generator_params_from_json(const std::string& text) {
  const Json doc = parse_json(text, "generator params");
  const JsonReader j(doc, "");
  GeneratorParams p;
  if (auto f = j.optional_field("min_rooms")) p.min_rooms = static_cast<int>(f->integer());
  if (auto f = j.optional_field("max_rooms")) p.max_rooms = static_cast<int>(f->integer());
  if (auto f = j.optional_field("min_room_area")) p.min_room_area = f->number();
  if (auto f = j.optional_field("max_room_area")) p.max_room_area = f->number();
  if (auto f = j.optional_field("min_room_side")) p.min_room_side = f->number();
  if (auto f = j.optional_field("min_aspect")) p.min_aspect = f->number();
  if (auto f = j.optional_field("max_aspect")) p.max_aspect = f->number();
  if (auto f = j.optional_field("min_density")) p.min_density = f->number();
  if (auto f = j.optional_field("max_density")) p.max_density = f->number();
  if (auto f = j.optional_field("door_width")) p.door_width = f->number();
  if (auto f = j.optional_field("furniture_gap")) p.furniture_gap = f->number();
  if (auto f = j.optional_field("max_attempts")) p.max_attempts = static_cast<int>(f->integer());
  if (auto f = j.optional_field("resolution")) p.nav.resolution = f->number();
  if (auto f = j.optional_field("room_labels")) {
    for (const auto& l : f->array()) p.room_labels.push_back(l.string());
  }
  p.validate();
  return p;
}

Scene generate_scene(const GeneratorParams& params, std::uint64_t seed, std::string scene_id) {
  params.validate();
  if (scene_id.empty()) scene_id = "scene_" + std::to_string(seed);
  Rng rng(mix_seed(seed, 0x5ce9e));
  SceneBuilder builder(params, rng);

  std::vector<std::string> secondary = params.room_labels;
  if (secondary.empty()) {
    for (const auto& l : known_room_labels()) {
      if (l != kPrimaryRoom) secondary.push_back(l);
    }
  }

  for (int attempt = 0; attempt < params.max_attempts;) {
    Rect bounds;
    auto rects = builder.layout(&bounds);
    ++attempt;
    if (!rects) continue;

    // Largest room is the living room; the rest draw from the vocabulary.
    std::size_t largest = 0;
    for (std::size_t i = 1; i < rects->size(); ++i) {
      if ((*rects)[i].area() > (*rects)[largest].area()) largest = i;
    }
    std::vector<RoomSpec> rooms;
    for (std::size_t i = 0; i < rects->size(); ++i) {
      RoomSpec room;
      room.room_id = "room_" + std::to_string(i);
      room.footprint = (*rects)[i];
      room.label = i == largest ? kPrimaryRoom
                                : secondary[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(secondary.size()) - 1))];
      rooms.push_back(std::move(room));
    }
    if (!builder.place_doors(rooms, builder.adjacencies(*rects))) continue;

    for (int furnish_try = 0; furnish_try < 5 && attempt <= params.max_attempts; ++furnish_try) {
      Scene scene;
      scene.scene_id = scene_id;
      scene.bounds = bounds;
      scene.rooms = rooms;
      scene.objects = builder.furnish(rooms);
      validate_scene(scene, 2.0 * params.agent.radius);
      if (rooms_connected(scene, params)) return scene;
      ++attempt;
    }
  }
  throw Error(ErrorCode::kGenerationFailed,
              "could not generate a connected scene for seed " + std::to_string(seed) + " after " +
                  std::to_string(params.max_attempts) + " attempts");
}

std::vector<Scene> generate_scenes(const GeneratorParams& params, int count, std::uint64_t seed) {
  if (count < 1) throw Error(ErrorCode::kInvalidArgument, "scene count must be positive");
  std::vector<Scene> out;
  for (int i = 0; i < count; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "scene_%03d", i);
    out.push_back(generate_scene(params, mix_seed(seed, static_cast<std::uint64_t>(i)), id));
  }
  return out;
}

}  // namespace navbench
