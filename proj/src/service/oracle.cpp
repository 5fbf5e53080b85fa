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

#include "service/oracle.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "common/error.hpp"
#include "geometry/planner.hpp"
#include "service/agents.hpp"
#include "tasks/instructions.hpp"

namespace navbench {
namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool mentions(const std::string& text, const std::string& word) {
  std::size_t pos = 0;
  while ((pos = text.find(word, pos)) != std::string::npos) {
    const std::size_t end = pos + word.size();
    const bool l = pos == 0 || !std::isalpha(static_cast<unsigned char>(text[pos - 1]));
    // Allow a plural "s".
    const bool r = end >= text.size() || !std::isalpha(static_cast<unsigned char>(text[end])) ||
                   (text[end] == 's' && (end + 1 >= text.size() || !std::isalpha(static_cast<unsigned char>(text[end + 1]))));
    if (l && r) return true;
    pos = end;
  }
  return false;
}

std::string fmt1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

// Room containing the reference path about a meter past the point closest
// to the agent.
const RoomSpec* next_room(const Episode& e, WorldPoint here, const Scene& scene) {
  const auto& w = e.reference_path.waypoints;
  std::size_t nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = distance(w[i], here);
    if (d < best) {
      best = d;
      nearest = i;
    }
  }
  double ahead = 0.0;
  std::size_t i = nearest;
  while (i + 1 < w.size() && ahead < 1.0) {
    ahead += distance(w[i], w[i + 1]);
    ++i;
  }
  return scene.room_at(w[i]);
}

}  // namespace

OracleAnswer oracle_answer(const std::string& query, const Episode& episode, const Pose& pose,
                           const SceneContext& ctx) {
  if (!episode.instructions.oracle_enabled) {
    throw Error(ErrorCode::kOracleDisabled, "episode '" + episode.episode_id + "' has no oracle");
  }
  const Scene& scene = ctx.scene();
  const WorldPoint here = pose.position();
  const Goal& goal = episode.final_goal();
  OracleAnswer a;
  const WorldPoint d = goal.point - here;
  a.hint.bearing_to_goal = norm(d) > 1e-12 ? normalize_angle(std::atan2(d.y, d.x) - pose.yaw) : 0.0;
  if (ctx.agent_grid().cell_of(here)) a.hint.geodesic_remaining = geodesic_distance(ctx.agent_grid(), here, goal.point);

  const std::string q = lower(query);
  const ObjectSpec* target = goal.target_object_id ? scene.find_object(*goal.target_object_id) : nullptr;
  std::vector<std::string> parts;

  if (target && (mentions(q, lower(target->label)) || mentions(q, "where"))) {
    const TargetRelation rel = describe_target(*target, ctx.graph(), scene);
    if (!rel.phrase.empty()) {
      parts.push_back("The " + rel.target_label + " is " + rel.phrase + " the " + rel.reference_label + ".");
      const Relation r = rel.phrase == "on" ? Relation::kOn : Relation::kNear;
      a.facts_used.push_back(SceneEdge{target->object_id, r, rel.reference_id}.id());
    }
    const SceneEdge in{target->object_id, Relation::kIn, target->room_id};
    if (ctx.graph().contains(in)) {
      parts.push_back("It is in the " + rel.room_label + ".");
      a.facts_used.push_back(in.id());
    }
  }

  bool room_asked = mentions(q, "room") || mentions(q, "which way") || mentions(q, "next");
  for (const auto& r : scene.rooms) room_asked = room_asked || mentions(q, lower(r.label));
  if (room_asked) {
    if (const RoomSpec* room = next_room(episode, here, scene)) parts.push_back("Head for the " + room->label + " next.");
  }

  std::string hint;
  if (a.hint.geodesic_remaining) {
    const double deg = a.hint.bearing_to_goal * 180.0 / std::numbers::pi;
    const std::string side = std::abs(deg) < 10.0 ? "straight ahead"
                             : std::abs(deg) > 170.0 ? "behind you"
                             : fmt1(std::abs(deg)) + " degrees to your " + (deg > 0 ? "left" : "right");
    hint = "The goal is about " + fmt1(*a.hint.geodesic_remaining) + " m away by walking, " + side + ".";
  } else {
    hint = "The goal cannot be reached from where you stand.";
  }
  parts.push_back(hint);
  for (std::size_t i = 0; i < parts.size(); ++i) a.text += (i ? " " : "") + parts[i];
  return a;
}

Json oracle_answer_to_json(const OracleAnswer& a) {
  return Json{{"text", a.text},
              {"facts_used", a.facts_used},
              {"hint", {{"bearing_to_goal", a.hint.bearing_to_goal},
                        {"geodesic_remaining", a.hint.geodesic_remaining ? Json(*a.hint.geodesic_remaining) : Json(nullptr)}}}};
}

SupervisionStep supervise(const SceneContext& ctx, const std::vector<WorldPoint>& candidates, const Pose& agent,
                          WorldPoint target, double ratio, Rng& rng) {
  if (candidates.empty()) throw Error(ErrorCode::kInvalidArgument, "supervise needs at least one candidate");
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "ratio must lie in [0, 1]");
  SupervisionStep s;
  s.candidates = candidates;
  const OccupancyGrid& grid = ctx.agent_grid();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!grid.cell_of(candidates[i]) || !grid.cell_of(target)) continue;
    const auto geo = geodesic_distance(grid, candidates[i], target);
    if (geo && *geo < best) {
      best = *geo;
      s.oracle_index = i;
    }
  }
  s.oracle_stop = oracle_stop_condition(ctx, agent.position(), target);
  s.from_oracle = rng.uniform() < ratio;
  return s;
}

double scheduled_ratio(const ScheduleParams& p, int epoch) {
  if (epoch < 0 || p.decay_time < 1) throw Error(ErrorCode::kInvalidArgument, "bad schedule arguments");
  return std::pow(p.ratio, epoch / p.decay_time + 1);
}

}  // namespace navbench
