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

#include "service/session.hpp"

#include "common/error.hpp"
#include "service/oracle.hpp"
#include "sim/trajectory_io.hpp"

namespace navbench {
namespace {

// Protocol-level failure carrying a wire error code.
struct ProtocolError {
  std::string code;
  std::string message;
};

const char* const kClientKinds[] = {"hello", "reset", "action", "oracle_query"};
const char* const kServerKinds[] = {"observation", "oracle_answer", "done", "error"};

}  // namespace

Json observation_to_json(const Observation& o) {
  Json scan = Json::array();
  for (const auto& r : o.range_scan) scan.push_back({r.bearing, r.range});
  Json det = Json::array();
  for (const auto& d : o.detections) {
    det.push_back({{"object_id", d.object_id}, {"label", d.label}, {"bearing", d.bearing}, {"range", d.range}});
  }
  return Json{{"pose", pose_to_json(o.pose)},
              {"range_scan", scan},
              {"detections", det},
              {"step_index", o.step_index},
              {"collided_last_step", o.collided_last_step}};
}

Json grid_to_json(const OccupancyGrid& grid) {
  Json runs = Json::array();
  bool state = false;
  std::int64_t run = 0;
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) {
      const bool occ = grid.occupied({r, c});
      if (occ != state) {
        runs.push_back(run);
        run = 0;
        state = occ;
      }
      ++run;
    }
  }
  runs.push_back(run);
  const Rect ext = grid.extent();
  return Json{{"resolution", grid.resolution()}, {"origin", point_to_json(ext.min)}, {"width", grid.width()},
              {"height", grid.height()}, {"encoding", "rle"}, {"runs", runs}};
}

Session::Session(std::shared_ptr<const LoadedDataset> dataset, std::string session_id, SessionOptions options)
    : dataset_(std::move(dataset)), session_id_(std::move(session_id)), options_(std::move(options)) {}

std::string Session::reply(const std::string& kind, const Json& payload, std::optional<std::int64_t> reply_to) {
  Json j{{"kind", kind}, {"session_id", session_id_}, {"seq", out_seq_++}};
  j["reply_to"] = reply_to ? Json(*reply_to) : Json(nullptr);
  j["payload"] = payload;
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

std::string Session::error_reply(const std::string& code, const std::string& message,
                                 std::optional<std::int64_t> seq) {
  Json p{{"code", code}, {"message", message}};
  p["offending_seq"] = seq ? Json(*seq) : Json(nullptr);
  return reply("error", p, seq);
}

std::string Session::reject_oversized() {
  return error_reply("parse_error", "message too large", std::nullopt);
}

std::string Session::handle(const std::string& line) {
  std::optional<std::int64_t> seq;
  try {
    if (line.size() > kMaxMessageBytes) return reject_oversized();
    Json msg = Json::parse(line, nullptr, false);
    if (msg.is_discarded()) return error_reply("parse_error", "message is not valid JSON", std::nullopt);
    if (!msg.is_object()) return error_reply("schema_invalid", "message must be an object", std::nullopt);
    if (auto it = msg.find("seq"); it != msg.end() && it->is_number_integer()) seq = it->get<std::int64_t>();
    if (!seq || *seq < 0) return error_reply("schema_invalid", "seq must be a non-negative integer", std::nullopt);
    auto kit = msg.find("kind");
    if (kit == msg.end() || !kit->is_string()) return error_reply("schema_invalid", "kind must be a string", seq);
    const std::string kind = kit->get<std::string>();
    bool known = false;
    for (const char* k : kClientKinds) known = known || kind == k;
    bool server_side = false;
    for (const char* k : kServerKinds) server_side = server_side || kind == k;
    if (server_side) return error_reply("protocol_violation", "'" + kind + "' is sent by the server only", seq);
    if (!known) return error_reply("unknown_kind", "unknown kind '" + kind + "'", seq);
    auto pit = msg.find("payload");
    if (pit == msg.end() || !pit->is_object()) return error_reply("schema_invalid", "payload must be an object", seq);
    if (last_seq_ && *seq <= *last_seq_) {
      return error_reply("bad_seq", "seq must exceed " + std::to_string(*last_seq_), seq);
    }
    if (kind != "hello") {
      if (!greeted_) return error_reply("protocol_violation", "send hello first", seq);
      auto sit = msg.find("session_id");
      if (sit == msg.end() || !sit->is_string() || sit->get<std::string>() != session_id_) {
        return error_reply("bad_session", "session_id does not match this session", seq);
      }
    }
    last_seq_ = seq;
    std::string reply_kind;
    Json out = dispatch(kind, JsonReader(*pit, "payload"), reply_kind);
    return reply(reply_kind, out, seq);
  } catch (const ProtocolError& e) {
    return error_reply(e.code, e.message, seq);
  } catch (const Error& e) {
    // The line itself parsed; a field the payload reader rejects is a schema problem.
    if (e.code() == ErrorCode::kParseError) return error_reply("schema_invalid", e.what(), seq);
    return error_reply(std::string(error_code_name(e.code())), e.what(), seq);
  } catch (const std::exception& e) {
    return error_reply("internal", e.what(), seq);
  } catch (...) {
    return error_reply("internal", "unknown failure", seq);
  }
}

Json Session::dispatch(const std::string& kind, const JsonReader& payload, std::string& reply_kind) {
  if (kind == "hello") {
    reply_kind = "hello";
    return on_hello(payload);
  }
  if (kind == "reset") {
    reply_kind = "observation";
    return on_reset(payload);
  }
  if (kind == "action") return on_action(payload, reply_kind);
  reply_kind = "oracle_answer";
  return on_oracle_query(payload);
}

Json Session::on_hello(const JsonReader& payload) {
  if (greeted_) throw ProtocolError{"protocol_violation", "hello already received"};
  if (auto v = payload.optional_field("protocol")) {
    if (v->integer() != kProtocolVersion) throw ProtocolError{"protocol_violation", "server speaks protocol 1"};
  }
  greeted_ = true;
  Json j{{"protocol", kProtocolVersion}, {"episode_count", dataset_->episodes.size()}};
  if (options_.only_episode) j["episode_id"] = *options_.only_episode;
  return j;
}

Json Session::on_reset(const JsonReader& payload) {
  if (episode_active()) throw ProtocolError{"episode_active", "finish the current episode first"};
  const std::string id = payload.field("episode_id").string();
  if (options_.only_episode && id != *options_.only_episode) {
    throw ProtocolError{"unknown_episode", "this session only serves '" + *options_.only_episode + "'"};
  }
  const Episode* e = dataset_->find(id);
  if (!e) throw ProtocolError{"unknown_episode", "no episode '" + id + "'"};
  SimConfig cfg = options_.sim;
  if (auto m = payload.optional_field("mode")) {
    const auto mode = parse_sim_mode(m->string());
    if (!mode) m->fail("expected 'strict' or 'telhop'");
    cfg.mode = *mode;
  }
  cfg.success_thresh = e->success_thresh;
  auto ctx = dataset_->scene_for(*e);
  Simulator sim(ctx, cfg);
  const Observation obs = sim.reset(*e);
  sim_.emplace(std::move(sim));
  episode_ = e;
  ctx_ = ctx;

  Json waypoints = Json::array();
  for (const auto& w : e->reference_path.waypoints) waypoints.push_back(point_to_json(w));
  return Json{{"episode_id", e->episode_id},
              {"task_type", std::string(task_type_name(e->task_type))},
              {"instructions", bundle_to_json(e->instructions)},
              {"mode", std::string(sim_mode_name(cfg.mode))},
              {"max_steps", cfg.max_steps},
              {"substep", cfg.substep},
              {"agent", agent_to_json(ctx->agent())},
              {"scene", Json::parse(scene_to_json(ctx->scene()))},
              {"map", grid_to_json(ctx->raw_grid())},
              {"reference_path", waypoints},
              {"t", sim_->time()},
              {"observation", observation_to_json(obs)}};
}

Json Session::on_action(const JsonReader& payload, std::string& reply_kind) {
  if (!sim_) throw ProtocolError{"no_active_episode", "reset an episode before acting"};
  if (sim_->done()) throw ProtocolError{"episode_finished", "episode '" + episode_->episode_id + "' is finished"};
  const Action action = action_from_json(payload);
  if (std::holds_alternative<OracleQuery>(action)) {
    throw ProtocolError{"unsupported_action", "send oracle queries as oracle_query messages"};
  }
  const StepResult step = sim_->step(action);
  if (!step.done) {
    reply_kind = "observation";
    return Json{{"episode_id", episode_->episode_id},
                {"t", sim_->time()},
                {"collided", step.collided},
                {"blocked_displacement", step.blocked_displacement},
                {"observation", observation_to_json(step.observation)}};
  }
  reply_kind = "done";
  const Trajectory& traj = sim_->trajectory();
  const EpisodeResult result = score_episode(*episode_, traj, *ctx_);
  finished_ = true;
  if (options_.on_done) options_.on_done(*episode_, traj, result);
  return Json{{"episode_id", episode_->episode_id},
              {"done_reason", std::string(done_reason_name(step.done_reason))},
              {"t", sim_->time()},
              {"collided", step.collided},
              {"observation", observation_to_json(step.observation)},
              {"metrics", episode_result_to_json(result)},
              {"trajectory", trajectory_to_json(traj)},
              {"csv", trajectory_to_csv(traj)}};
}

Json Session::on_oracle_query(const JsonReader& payload) {
  if (!sim_) throw ProtocolError{"no_active_episode", "reset an episode before querying"};
  if (sim_->done()) throw ProtocolError{"episode_finished", "episode '" + episode_->episode_id + "' is finished"};
  const std::string text = payload.field("text").string();
  return oracle_answer_to_json(oracle_answer(text, *episode_, sim_->pose(), *ctx_));
}

}  // namespace navbench
