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

#include "tasks/episode.hpp"

#include <numbers>
#include <sstream>

#include "common/error.hpp"

namespace navbench {

std::string_view task_type_name(TaskType t) {
  switch (t) {
    case TaskType::kFine: return "fine";
    case TaskType::kCoarse: return "coarse";
    case TaskType::kVisualRef: return "visual_ref";
    case TaskType::kLongHorizon: return "long_horizon";
    case TaskType::kDialogue: return "dialogue";
  }
  return "fine";
}

std::optional<TaskType> parse_task_type(std::string_view name) {
  for (TaskType t : kAllTaskTypes) {
    if (task_type_name(t) == name) return t;
  }
  return std::nullopt;
}

void validate_bundle(TaskType type, const InstructionBundle& b) {
  auto require = [&](bool cond, const char* what) {
    if (!cond) {
      throw Error(ErrorCode::kInvariantViolation,
                  std::string("instruction bundle for ") + std::string(task_type_name(type)) + ": " + what);
    }
  };
  const bool fine = type == TaskType::kFine;
  const bool coarse = type == TaskType::kCoarse || type == TaskType::kVisualRef || type == TaskType::kDialogue;
  require(b.fine.has_value() == fine, fine ? "fine text required" : "unexpected fine text");
  require(b.coarse.has_value() == coarse, coarse ? "coarse styles required" : "unexpected coarse styles");
  require(b.goal_snapshot.has_value() == (type == TaskType::kVisualRef),
          type == TaskType::kVisualRef ? "goal snapshot required" : "unexpected goal snapshot");
  require(b.sub_instructions.has_value() == (type == TaskType::kLongHorizon),
          type == TaskType::kLongHorizon ? "sub-instructions required" : "unexpected sub-instructions");
  require(b.oracle_enabled == (type == TaskType::kDialogue),
          type == TaskType::kDialogue ? "oracle must be enabled" : "oracle must be disabled");
  if (b.fine) require(!b.fine->empty(), "empty fine text");
  if (b.coarse) {
    require(!b.coarse->formal.empty() && !b.coarse->natural.empty() && !b.coarse->casual.empty(),
            "empty coarse style");
  }
  if (b.sub_instructions) {
    require(b.sub_instructions->size() >= 2 && b.sub_instructions->size() <= 3, "needs 2-3 sub-instructions");
  }
}

bool operator==(const PlannedPath& a, const PlannedPath& b) {
  return a.waypoints == b.waypoints && a.length == b.length;
}

bool operator==(const Episode& a, const Episode& b) {
  return a.episode_id == b.episode_id && a.scene_id == b.scene_id && a.task_type == b.task_type &&
         a.instructions == b.instructions && a.start == b.start && a.goals == b.goals &&
         a.reference_path == b.reference_path && a.success_thresh == b.success_thresh;
}

Json pose_to_json(const Pose& p) { return Json{{"x", p.x}, {"y", p.y}, {"yaw", p.yaw}}; }

Pose pose_from_json(const JsonReader& j) {
  Pose p{j.field("x").number(), j.field("y").number(), j.field("yaw").number()};
  if (p.yaw < -std::numbers::pi || p.yaw >= std::numbers::pi) j.field("yaw").fail("yaw outside [-pi, pi)");
  return p;
}

Json bundle_to_json(const InstructionBundle& b) {
  Json j = Json::object();
  if (b.fine) j["fine"] = *b.fine;
  if (b.coarse) j["coarse"] = {{"formal", b.coarse->formal}, {"natural", b.coarse->natural}, {"casual", b.coarse->casual}};
  if (b.goal_snapshot) {
    Json visible = Json::array();
    for (const auto& v : b.goal_snapshot->visible) {
      visible.push_back({{"label", v.label}, {"bearing", v.bearing}, {"range", v.range}});
    }
    j["goal_snapshot"] = {{"captured_at", pose_to_json(b.goal_snapshot->captured_at)}, {"visible", visible}};
  }
  if (b.sub_instructions) j["sub_instructions"] = *b.sub_instructions;
  j["oracle_enabled"] = b.oracle_enabled;
  return j;
}

InstructionBundle bundle_from_json(const JsonReader& j) {
  InstructionBundle b;
  if (auto f = j.optional_field("fine")) b.fine = f->string();
  if (auto c = j.optional_field("coarse")) {
    b.coarse = CoarseInstructions{c->field("formal").string(), c->field("natural").string(),
                                  c->field("casual").string()};
  }
  if (auto g = j.optional_field("goal_snapshot")) {
    GoalSnapshot snap;
    snap.captured_at = pose_from_json(g->field("captured_at"));
    for (const auto& v : g->field("visible").array()) {
      snap.visible.push_back({v.field("label").string(), v.field("bearing").number(), v.field("range").number()});
    }
    b.goal_snapshot = std::move(snap);
  }
  if (auto s = j.optional_field("sub_instructions")) {
    std::vector<std::string> subs;
    for (const auto& item : s->array()) subs.push_back(item.string());
    b.sub_instructions = std::move(subs);
  }
  if (auto o = j.optional_field("oracle_enabled")) b.oracle_enabled = o->boolean();
  return b;
}

Json episode_to_json(const Episode& e) {
  Json goals = Json::array();
  for (const auto& g : e.goals) {
    Json gj{{"point", point_to_json(g.point)}};
    gj["target_object_id"] = g.target_object_id ? Json(*g.target_object_id) : Json(nullptr);
    goals.push_back(std::move(gj));
  }
  Json waypoints = Json::array();
  for (const auto& w : e.reference_path.waypoints) waypoints.push_back(point_to_json(w));
  return Json{{"episode_id", e.episode_id},
              {"scene_id", e.scene_id},
              {"task_type", std::string(task_type_name(e.task_type))},
              {"instructions", bundle_to_json(e.instructions)},
              {"start", pose_to_json(e.start)},
              {"goals", goals},
              {"reference_path", {{"waypoints", waypoints}, {"length", e.reference_path.length}}},
              {"success_thresh", e.success_thresh}};
}

Episode episode_from_json(const JsonReader& j) {
  Episode e;
  e.episode_id = j.field("episode_id").string();
  if (e.episode_id.empty()) j.field("episode_id").fail("must be non-empty");
  e.scene_id = j.field("scene_id").string();
  const auto type_field = j.field("task_type");
  const auto type = parse_task_type(type_field.string());
  if (!type) type_field.fail("unknown task type '" + type_field.string() + "'");
  e.task_type = *type;
  e.instructions = bundle_from_json(j.field("instructions"));
  e.start = pose_from_json(j.field("start"));
  for (const auto& g : j.field("goals").array()) {
    Goal goal{g.field("point").point(), std::nullopt};
    if (auto t = g.optional_field("target_object_id"); t && !t->raw().is_null()) goal.target_object_id = t->string();
    e.goals.push_back(std::move(goal));
  }
  const auto path = j.field("reference_path");
  for (const auto& w : path.field("waypoints").array()) e.reference_path.waypoints.push_back(w.point());
  e.reference_path.length = path.field("length").number();
  e.success_thresh = j.field("success_thresh").number();

  const std::size_t want_min = e.task_type == TaskType::kLongHorizon ? 2 : 1;
  const std::size_t want_max = e.task_type == TaskType::kLongHorizon ? 3 : 1;
  if (e.goals.size() < want_min || e.goals.size() > want_max) {
    throw Error(ErrorCode::kInvariantViolation, "episode '" + e.episode_id + "': wrong goal count for task type");
  }
  if (e.reference_path.waypoints.empty()) {
    throw Error(ErrorCode::kInvariantViolation, "episode '" + e.episode_id + "': empty reference path");
  }
  if (!(e.success_thresh > 0.0)) {
    throw Error(ErrorCode::kInvariantViolation, "episode '" + e.episode_id + "': success_thresh must be > 0");
  }
  validate_bundle(e.task_type, e.instructions);
  return e;
}

std::string episodes_to_jsonl(const std::vector<Episode>& episodes) {
  std::string out;
  for (const auto& e : episodes) {
    out += episode_to_json(e).dump();
    out += '\n';
  }
  return out;
}

std::vector<Episode> episodes_from_jsonl(const std::string& text, const std::string& source) {
  std::vector<Episode> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    const Json j = parse_json(line, where);
    try {
      out.push_back(episode_from_json(JsonReader(j, "")));
    } catch (const Error& e) {
      throw Error(e.code(), where + ": " + e.what());
    }
  }
  return out;
}

}  // namespace navbench
