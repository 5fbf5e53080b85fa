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

#include "sim/trajectory_io.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "common/error.hpp"
#include "tasks/episode.hpp"

namespace navbench {

Json action_to_json(const Action& a) {
  if (const auto* d = std::get_if<DiscreteAction>(&a)) {
    return Json{{"type", "discrete"}, {"primitive", std::string(primitive_name(d->primitive))}};
  }
  if (const auto* c = std::get_if<ContinuousAction>(&a)) {
    return Json{{"type", "continuous"}, {"v", c->v}, {"omega", c->omega}, {"dt", c->dt}};
  }
  if (const auto* h = std::get_if<WaypointHop>(&a)) {
    return Json{{"type", "waypoint_hop"}, {"target", point_to_json(h->target)}};
  }
  return Json{{"type", "oracle_query"}, {"text", std::get<OracleQuery>(a).text}};
}

Action action_from_json(const JsonReader& j) {
  const auto type_field = j.field("type");
  const std::string type = type_field.string();
  if (type == "discrete") {
    const auto f = j.field("primitive");
    const auto p = parse_primitive(f.string());
    if (!p) f.fail("unknown primitive '" + f.string() + "'");
    return DiscreteAction{*p};
  }
  if (type == "continuous") {
    return ContinuousAction{j.field("v").number(), j.field("omega").number(), j.field("dt").number()};
  }
  if (type == "waypoint_hop") return WaypointHop{j.field("target").point()};
  if (type == "oracle_query") return OracleQuery{j.field("text").string()};
  type_field.fail("unknown action type '" + type + "'");
}

Json trajectory_to_json(const Trajectory& t) {
  Json samples = Json::array();
  for (const auto& s : t.samples) samples.push_back({s.t, s.pose.x, s.pose.y, s.pose.yaw});
  Json actions = Json::array();
  for (const auto& a : t.actions) actions.push_back(action_to_json(a));
  Json events = Json::array();
  for (const auto& e : t.collision_events) {
    events.push_back({{"t", e.t}, {"contact_point", point_to_json(e.contact_point)},
                      {"blocked_displacement", e.blocked_displacement}});
  }
  return Json{{"episode_id", t.episode_id},
              {"mode", std::string(sim_mode_name(t.mode))},
              {"samples", samples},
              {"actions", actions},
              {"step_blocked", t.step_blocked},
              {"collision_events", events},
              {"stopped", t.stopped},
              {"stop_pose", pose_to_json(t.stop_pose)},
              {"done_reason", std::string(done_reason_name(t.done_reason))}};
}

Trajectory trajectory_from_json(const JsonReader& j) {
  Trajectory t;
  t.episode_id = j.field("episode_id").string();
  const auto mode_field = j.field("mode");
  const auto mode = parse_sim_mode(mode_field.string());
  if (!mode) mode_field.fail("unknown mode");
  t.mode = *mode;
  for (const auto& s : j.field("samples").array()) {
    const auto v = s.array();
    if (v.size() != 4) s.fail("expected [t, x, y, yaw]");
    t.samples.push_back({v[0].number(), {v[1].number(), v[2].number(), v[3].number()}});
  }
  for (const auto& a : j.field("actions").array()) t.actions.push_back(action_from_json(a));
  for (const auto& b : j.field("step_blocked").array()) t.step_blocked.push_back(b.number());
  for (const auto& e : j.field("collision_events").array()) {
    t.collision_events.push_back(
        {e.field("t").number(), e.field("contact_point").point(), e.field("blocked_displacement").number()});
  }
  t.stopped = j.field("stopped").boolean();
  t.stop_pose = pose_from_json(j.field("stop_pose"));
  const auto reason_field = j.field("done_reason");
  const auto reason = parse_done_reason(reason_field.string());
  if (!reason) reason_field.fail("unknown done reason");
  t.done_reason = *reason;
  if (t.samples.empty()) j.field("samples").fail("at least one sample required");
  if (t.step_blocked.size() != t.actions.size()) j.field("step_blocked").fail("length must match actions");
  for (std::size_t i = 1; i < t.samples.size(); ++i) {
    if (!(t.samples[i].t > t.samples[i - 1].t)) j.field("samples").fail("t must be strictly increasing");
  }
  return t;
}

Trajectory load_trajectory_json(const std::string& path) {
  const Json j = parse_json(read_text_file(path), path);
  try {
    return trajectory_from_json(JsonReader(j, ""));
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::string trajectory_to_csv(const Trajectory& t) {
  // Shortest round-trip text for the pose so a CSV scores exactly like the
  // trajectory it came from. Time sits on the tick grid; ms is enough.
  std::string out = "t,x,y,yaw\n";
  char buf[160];
  for (const auto& s : t.samples) {
    char* p = buf + std::snprintf(buf, sizeof buf, "%.3f", s.t);
    for (double v : {s.pose.x, s.pose.y, s.pose.yaw}) {
      *p++ = ',';
      p = std::to_chars(p, buf + sizeof buf, v).ptr;
    }
    *p++ = '\n';
    out.append(buf, p);
  }
  return out;
}

std::vector<TrajectorySample> samples_from_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || (line != "t,x,y,yaw" && line != "t,x,y,yaw\r")) {
    throw Error(ErrorCode::kParseError, source + ":1: expected header 't,x,y,yaw'");
  }
  std::vector<TrajectorySample> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    TrajectorySample s;
    char tail = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf%c", &s.t, &s.pose.x, &s.pose.y, &s.pose.yaw, &tail) < 4 ||
        (tail != 0 && tail != '\r')) {
      throw Error(ErrorCode::kParseError, source + ":" + std::to_string(line_no) + ": expected four numbers");
    }
    if (!out.empty() && !(s.t > out.back().t)) {
      throw Error(ErrorCode::kParseError, source + ":" + std::to_string(line_no) + ": t must increase");
    }
    out.push_back(s);
  }
  if (out.empty()) throw Error(ErrorCode::kParseError, source + ": no samples");
  return out;
}

}  // namespace navbench
