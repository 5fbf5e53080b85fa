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

#include "tasks/instructions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <optional>
#include <regex>

#include "env/generator.hpp"
#include "sim/agent_body.hpp"

namespace navbench {
namespace {

constexpr double kSimplifyTolerance = 0.3;

struct Stretch {
  std::vector<WorldPoint> points;  // at least two
  double length = 0.0;
};

double segment_distance(WorldPoint p, WorldPoint a, WorldPoint b, double* t_out) {
  const WorldPoint ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  if (t_out) *t_out = t;
  return distance(p, a + t * ab);
}

double heading(WorldPoint a, WorldPoint b) { return std::atan2(b.y - a.y, b.x - a.x); }

std::vector<Stretch> split_stretches(const std::vector<WorldPoint>& pts) {
  std::vector<Stretch> out;
  Stretch cur{{pts[0]}, 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (cur.points.size() >= 2) {
      const double turn = normalize_angle(heading(pts[i - 1], pts[i]) - heading(cur.points[cur.points.size() - 2], pts[i - 1]));
      if (std::abs(turn) >= kTurnSplitAngle) {
        out.push_back(cur);
        cur = Stretch{{pts[i - 1]}, 0.0};
      }
    }
    cur.points.push_back(pts[i]);
    cur.length += distance(pts[i - 1], pts[i]);
  }
  out.push_back(cur);
  return out;
}

std::string room_label_of(const Scene& scene, const std::string& room_id) {
  const RoomSpec* r = scene.find_room(room_id);
  return r ? r->label : "hallway";
}

std::string meters(double d) {
  const long n = std::max(1L, std::lround(d));
  return "about " + std::to_string(n) + (n == 1 ? " meter" : " meters");
}

// Landmark phrase for a stretch, e.g. " past the couch on your left".
std::string landmark_phrase(const Stretch& s, const Scene& scene, const SceneGraph& graph, double agent_height) {
  const ObjectSpec* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& id : graph.nodes) {
    const ObjectSpec* o = scene.find_object(id);
    if (!o || o->base_height >= agent_height) continue;
    // Sampled distance from the stretch to the footprint edge.
    double fd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < s.points.size(); ++i) {
      const WorldPoint a = s.points[i - 1], b = s.points[i];
      const double len = distance(a, b);
      const int n = std::max(1, static_cast<int>(std::ceil(len / 0.1)));
      for (int k = 0; k <= n; ++k) {
        fd = std::min(fd, footprint_distance(o->footprint, a + (static_cast<double>(k) / n) * (b - a)));
      }
    }
    if (fd <= kLandmarkRadius && fd < best_d) {
      best = o;
      best_d = fd;
    }
  }
  if (best) {
    const WorldPoint c = footprint_center(best->footprint);
    // Side relative to the leg closest to the object.
    double leg_d = std::numeric_limits<double>::infinity(), leg_t = 0.0;
    WorldPoint a, b;
    for (std::size_t i = 1; i < s.points.size(); ++i) {
      double t = 0.0;
      const double dd = segment_distance(c, s.points[i - 1], s.points[i], &t);
      if (dd < leg_d) {
        leg_d = dd;
        leg_t = t;
        a = s.points[i - 1];
        b = s.points[i];
      }
    }
    const WorldPoint dir = b - a;
    const double side = cross(dir, c - a) / std::max(norm(dir), 1e-12);
    if (leg_t >= 1.0 && std::abs(side) < 0.5 && b == s.points.back()) {
      return " toward the " + best->label + " ahead";
    }
    return " past the " + best->label + (side > 0.0 ? " on your left" : " on your right");
  }
  const RoomSpec* from = scene.room_at(s.points.front());
  const RoomSpec* to = scene.room_at(s.points.back());
  if (to && from != to) return " into the " + to->label;
  if (to) return " through the " + to->label;
  return " along the hallway";
}

bool contains_word(const std::string& lower, const std::string& word) {
  std::size_t pos = 0;
  while ((pos = lower.find(word, pos)) != std::string::npos) {
    const bool left_ok = pos == 0 || !std::isalpha(static_cast<unsigned char>(lower[pos - 1]));
    const std::size_t end = pos + word.size();
    const bool right_ok = end >= lower.size() || !std::isalpha(static_cast<unsigned char>(lower[end]));
    if (left_ok && right_ok) return true;
    pos = end;
  }
  return false;
}

std::string to_lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

}  // namespace

std::vector<WorldPoint> simplify_polyline(std::span<const WorldPoint> points, double tolerance) {
  if (points.size() <= 2) return {points.begin(), points.end()};
  std::vector<bool> keep(points.size(), false);
  keep.front() = keep.back() = true;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, points.size() - 1}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    double worst = -1.0;
    std::size_t idx = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const double d = segment_distance(points[i], points[lo], points[hi], nullptr);
      if (d > worst) {
        worst = d;
        idx = i;
      }
    }
    if (worst > tolerance) {
      keep[idx] = true;
      stack.push_back({lo, idx});
      stack.push_back({idx, hi});
    }
  }
  std::vector<WorldPoint> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (keep[i] && (out.empty() || distance(out.back(), points[i]) > 1e-9)) out.push_back(points[i]);
  }
  if (out.size() == 1) out.push_back(points.back());
  return out;
}

std::string make_fine_instruction(const PlannedPath& path, const SceneGraph& graph, const Scene& scene) {
  const double kAgentHeight = AgentBody{}.height;
  std::vector<WorldPoint> pts = simplify_polyline(path.waypoints, kSimplifyTolerance);
  if (pts.size() < 2) pts = {path.waypoints.front(), path.waypoints.back()};
  const auto stretches = split_stretches(pts);

  static const char* kVerbs[] = {"walk", "continue", "go"};
  std::string text;
  for (std::size_t i = 0; i < stretches.size(); ++i) {
    const Stretch& s = stretches[i];
    const std::string lm = landmark_phrase(s, scene, graph, kAgentHeight);
    if (i == 0) {
      text += "Walk forward " + meters(s.length) + lm + ".";
    } else {
      const Stretch& prev = stretches[i - 1];
      const double turn = normalize_angle(heading(s.points[0], s.points[1]) -
                                          heading(prev.points[prev.points.size() - 2], prev.points.back()));
      const std::string dir = turn > 0.0 ? "left" : "right";
      const std::string how = std::abs(turn) >= 2.356 ? "Turn sharply " : "Turn ";
      text += " " + how + dir + " and " + kVerbs[i % 3] + " " + meters(s.length) + lm + ".";
    }
  }

  // Closing clause names whatever sits closest to the goal.
  const WorldPoint goal = path.waypoints.back();
  const ObjectSpec* nearest = nullptr;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& o : scene.objects) {
    if (o.base_height >= kAgentHeight) continue;
    const double d = footprint_distance(o.footprint, goal);
    if (d < best) {
      best = d;
      nearest = &o;
    }
  }
  if (nearest) {
    text += " Stop near the " + nearest->label + ".";
  } else {
    const RoomSpec* r = scene.room_at(goal);
    text += " Stop near the middle of the " + (r ? r->label : std::string("hallway")) + ".";
  }
  return text;
}

FineCheck check_fine_instruction(const std::string& text) {
  static const std::vector<std::string> kSpatial = {"left", "right", "past", "toward", "ahead", "into",
                                                    "through", "along", "near", "beside", "behind", "next to"};
  static const std::vector<std::string> kVerbs = {"walk", "turn", "continue", "go", "head", "move", "proceed",
                                                  "enter", "pass", "follow", "keep"};
  static const std::vector<std::string> kForbidden = {"walks", "moves", "enters", "proceeds", "turns",
                                                      "goes", "heads", "move backward"};
  static const std::regex kEnd(R"(\bStop (near|at|by|beside|in front of) the [a-z])");

  const std::string lower = to_lower(text);
  FineCheck c;
  auto any = [&](const std::vector<std::string>& words) {
    return std::any_of(words.begin(), words.end(), [&](const std::string& w) { return contains_word(lower, w); });
  };
  c.landmark = any(known_object_labels()) || any(known_room_labels()) || contains_word(lower, "hallway");
  c.spatial_term = any(kSpatial);
  c.action_verb = any(kVerbs);
  c.end_clause = std::regex_search(text, kEnd);
  c.forbidden = any(kForbidden);
  return c;
}

TargetRelation describe_target(const ObjectSpec& target, const SceneGraph& graph, const Scene& scene) {
  TargetRelation rel;
  rel.target_label = target.label;
  rel.room_label = room_label_of(scene, target.room_id);
  const SceneEdge* on = nullptr;
  const SceneEdge* near = nullptr;
  double near_d = std::numeric_limits<double>::infinity();
  for (const SceneEdge* e : graph.edges_from(target.object_id)) {
    if (e->relation == Relation::kOn && !on) on = e;
    if (e->relation == Relation::kNear) {
      const ObjectSpec* other = scene.find_object(e->object);
      if (!other || other->label == target.label) continue;
      // Overhead fixtures and things resting on the target make poor references.
      if (other->base_height >= AgentBody{}.height) continue;
      if (graph.contains({other->object_id, Relation::kOn, target.object_id})) continue;
      const double d = distance(footprint_center(target.footprint), footprint_center(other->footprint));
      if (d < near_d) {
        near_d = d;
        near = e;
      }
    }
  }
  const SceneEdge* use = on ? on : near;
  if (use) {
    const ObjectSpec* ref = scene.find_object(use->object);
    rel.phrase = use->relation == Relation::kOn ? "on" : "near";
    rel.reference_label = ref->label;
    rel.reference_id = ref->object_id;
  }
  return rel;
}

CoarseInstructions render_coarse(const TargetRelation& rel) {
  const std::string where = rel.phrase.empty() ? "" : " " + rel.phrase + " the " + rel.reference_label;
  CoarseInstructions c;
  c.formal = "Proceed to the " + rel.room_label + " and locate the " + rel.target_label + where + ".";
  c.natural = "Could you go over to the " + rel.room_label + " and find the " + rel.target_label + where +
              ", please?";
  c.casual = capitalize(rel.room_label) + ", " + rel.target_label + (where.empty() ? " somewhere in there" : where) + ".";
  return c;
}

CoarseInstructions make_coarse_instructions(const ObjectSpec& target, const SceneGraph& graph, const Scene& scene) {
  return render_coarse(describe_target(target, graph, scene));
}

const std::vector<std::string>& relation_phrases() {
  static const std::vector<std::string> kPhrases = {"on",     "near",  "next to",         "beside",
                                                    "under",  "behind", "in front of",    "to the left of",
                                                    "to the right of", "inside", "in"};
  return kPhrases;
}

}  // namespace navbench
