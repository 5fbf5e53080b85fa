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

#include "navbench/navbench.h"

#include <cstring>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "common/error.hpp"
#include "common/json_util.hpp"
#include "env/generator.hpp"
#include "env/scene.hpp"
#include "geometry/planner.hpp"
#include "service/offline.hpp"
#include "service/runner.hpp"
#include "service/server.hpp"
#include "service/session.hpp"
#include "sim/simulator.hpp"
#include "sim/trajectory_io.hpp"
#include "tasks/dataset.hpp"

namespace fs = std::filesystem;
using namespace navbench;

struct nb_scene {
  SceneContextPtr ctx;
};

struct nb_dataset {
  std::shared_ptr<const LoadedDataset> ds;
};

struct nb_sim {
  std::shared_ptr<const LoadedDataset> ds;
  const Episode* episode = nullptr;
  SceneContextPtr ctx;
  std::optional<Simulator> sim;
};

struct nb_session {
  std::shared_ptr<const LoadedDataset> ds;
  std::unique_ptr<Session> session;
};

struct nb_server {
  std::shared_ptr<const LoadedDataset> ds;
  std::unique_ptr<Server> server;
};

namespace {

thread_local std::string g_last_error;

nb_status fail(nb_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <typename Fn>
nb_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return NB_OK;
  } catch (const Error& e) {
    return fail(static_cast<nb_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(NB_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NB_INTERNAL, e.what());
  } catch (...) {
    return fail(NB_INTERNAL, "unknown failure");
  }
}

void require(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s) {
  if (out) *out = dup_string(s);
}

Json options(const char* text, const char* what) {
  if (!text || !*text) return Json::object();
  Json j = parse_json(text, what);
  if (!j.is_object()) throw Error(ErrorCode::kSchemaInvalid, std::string(what) + ": expected an object");
  return j;
}

SimConfig sim_config(const JsonReader& j) {
  SimConfig c;
  if (auto f = j.optional_field("mode")) {
    const auto m = parse_sim_mode(f->string());
    if (!m) f->fail("expected 'strict' or 'telhop'");
    c.mode = *m;
  }
  if (auto f = j.optional_field("max_steps")) c.max_steps = static_cast<int>(f->integer());
  if (auto f = j.optional_field("collision_thresh")) c.collision_thresh = f->number();
  if (auto f = j.optional_field("allow_sliding")) c.allow_sliding = f->boolean();
  c.validate();
  return c;
}

// Outputs are staged next to the destination and renamed into place, so a
// failed run leaves nothing behind. An existing destination is replaced only
// when it looks like an earlier output (holds `marker`).
template <typename Fn>
void write_dir_atomically(const std::string& out_dir, const char* marker, Fn&& fill) {
  const fs::path out(out_dir);
  std::error_code ec;
  if (fs::exists(out, ec)) {
    if (!fs::is_directory(out, ec)) throw Error(ErrorCode::kIoError, out_dir + ": exists and is not a directory");
    if (!fs::is_empty(out, ec) && !fs::exists(out / marker, ec)) {
      throw Error(ErrorCode::kIoError, out_dir + ": not empty and not an earlier output; refusing to replace");
    }
  }
  fs::path stage = out;
  stage += ".partial";
  fs::remove_all(stage, ec);
  try {
    fill(stage.string());
    fs::remove_all(out, ec);
    fs::rename(stage, out, ec);
    if (ec) throw Error(ErrorCode::kIoError, out_dir + ": " + ec.message());
  } catch (...) {
    fs::remove_all(stage, ec);
    throw;
  }
}

std::string report_csv_path(const std::string& report_path) {
  fs::path p(report_path);
  if (p.extension() == ".json") return p.replace_extension(".csv").string();
  return report_path + ".csv";
}

void write_report_files(const MetricsReport& report, const std::string& report_path) {
  const std::string csv_path = report_csv_path(report_path);
  try {
    save_report(report, report_path);
    write_text_file(csv_path, report_to_csv(report));
  } catch (...) {
    std::error_code ec;
    fs::remove(report_path, ec);
    fs::remove(csv_path, ec);
    throw;
  }
}

SessionOptions session_options(const LoadedDataset& ds, const JsonReader& j) {
  SimConfig sim = sim_config(j);
  std::optional<std::string> episode;
  if (auto f = j.optional_field("episode")) episode = f->string();
  if (auto f = j.optional_field("human_session_dir")) {
    if (!episode) j.fail("human_session_dir needs episode");
    return human_session_options(ds, *episode, f->string(), sim);
  }
  SessionOptions o;
  o.sim = sim;
  if (episode) {
    if (!ds.find(*episode)) throw Error(ErrorCode::kUnknownEpisode, "no episode '" + *episode + "' in the dataset");
    o.only_episode = episode;
  }
  return o;
}

}  // namespace

extern "C" {

const char* nb_version(void) { return NAVBENCH_VERSION; }

const char* nb_status_name(nb_status status) {
  if (status == NB_OK) return "ok";
  if (status < NB_INVALID_ARGUMENT || status > NB_INTERNAL) return "unknown";
  // Names are string literals, so data() is NUL-terminated.
  return error_code_name(static_cast<ErrorCode>(status)).data();
}

const char* nb_last_error_message(void) { return g_last_error.c_str(); }

void nb_string_free(char* s) { std::free(s); }

nb_status nb_scene_generate(const char* params_json, uint64_t seed, const char* scene_id, nb_scene** out) {
  return guarded([&] {
    require(out, "out");
    const GeneratorParams p =
        params_json && *params_json ? generator_params_from_json(params_json) : GeneratorParams{};
    *out = new nb_scene{make_scene_context(generate_scene(p, seed, scene_id ? scene_id : ""), p.agent, p.nav)};
  });
}

nb_status nb_scene_load(const char* path, nb_scene** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new nb_scene{make_scene_context(load_scene(path))};
  });
}

nb_status nb_scene_from_json(const char* json, nb_scene** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new nb_scene{make_scene_context(scene_from_json(json, "scene json"))};
  });
}

nb_status nb_scene_to_json(const nb_scene* scene, char** out) {
  return guarded([&] {
    require(scene, "scene");
    require(out, "out");
    put(out, scene_to_json(scene->ctx->scene()));
  });
}

nb_status nb_scene_save(const nb_scene* scene, const char* path) {
  return guarded([&] {
    require(scene, "scene");
    require(path, "path");
    save_scene(scene->ctx->scene(), path);
  });
}

nb_status nb_scene_geodesic(const nb_scene* scene, double ax, double ay, double bx, double by, double* out) {
  return guarded([&] {
    require(scene, "scene");
    require(out, "out");
    const auto d = geodesic_distance(scene->ctx->agent_grid(), {ax, ay}, {bx, by});
    if (!d) throw Error(ErrorCode::kUnreachable, "no path between the points");
    *out = *d;
  });
}

void nb_scene_free(nb_scene* scene) { delete scene; }

nb_status nb_generate_scenes(const char* params_json, int count, uint64_t seed, const char* out_dir) {
  return guarded([&] {
    require(out_dir, "out_dir");
    const GeneratorParams p =
        params_json && *params_json ? generator_params_from_json(params_json) : GeneratorParams{};
    const auto scenes = generate_scenes(p, count, seed);
    write_dir_atomically(out_dir, "index.json", [&](const std::string& dir) { write_scene_dir(scenes, p, seed, dir); });
  });
}

nb_status nb_generate_dataset(const char* scenes_dir, const char* options_json, const char* out_dir) {
  return guarded([&] {
    require(scenes_dir, "scenes_dir");
    require(out_dir, "out_dir");
    const Json doc = options(options_json, "dataset options");
    const JsonReader j(doc, "");
    DatasetParams p;
    if (auto f = j.optional_field("seed")) p.seed = static_cast<std::uint64_t>(f->integer());
    if (auto f = j.optional_field("tasks")) {
      p.tasks.clear();
      for (const auto& t : f->array()) {
        const auto tt = parse_task_type(t.string());
        if (!tt) t.fail("unknown task type '" + t.string() + "'");
        p.tasks.push_back(*tt);
      }
    }
    if (auto f = j.optional_field("fine_per_scene")) p.fine_per_scene = static_cast<int>(f->integer());
    if (auto f = j.optional_field("coarse_per_scene")) p.coarse_per_scene = static_cast<int>(f->integer());
    if (auto f = j.optional_field("long_horizon_per_scene")) p.long_horizon_per_scene = static_cast<int>(f->integer());
    if (auto f = j.optional_field("success_thresh")) p.success_thresh = f->number();
    if (auto f = j.optional_field("threads")) p.threads = static_cast<int>(f->integer());
    if (auto f = j.optional_field("refine"); f && f->boolean()) p.clients = clients_from_environment();
    p.validate();
    const auto scenes = load_scene_dir(scenes_dir);
    const Dataset ds = build_dataset(scenes, p);
    write_dir_atomically(out_dir, "manifest.json", [&](const std::string& dir) { write_dataset(ds, scenes, dir); });
  });
}

nb_status nb_dataset_load(const char* dir, nb_dataset** out) {
  return guarded([&] {
    require(dir, "dir");
    require(out, "out");
    *out = new nb_dataset{std::make_shared<const LoadedDataset>(load_dataset(dir))};
  });
}

nb_status nb_dataset_episode_ids(const nb_dataset* ds, char** out) {
  return guarded([&] {
    require(ds, "dataset");
    require(out, "out");
    Json ids = Json::array();
    for (const auto& e : ds->ds->episodes) ids.push_back(e.episode_id);
    put(out, ids.dump());
  });
}

nb_status nb_dataset_episode(const nb_dataset* ds, const char* episode_id, char** out) {
  return guarded([&] {
    require(ds, "dataset");
    require(episode_id, "episode_id");
    require(out, "out");
    const Episode* e = ds->ds->find(episode_id);
    if (!e) throw Error(ErrorCode::kUnknownEpisode, std::string("no episode '") + episode_id + "'");
    put(out, episode_to_json(*e).dump());
  });
}

void nb_dataset_free(nb_dataset* ds) { delete ds; }

nb_status nb_import_reviews(const char* dataset_dir, const char* csv_path, int* applied) {
  return guarded([&] {
    require(dataset_dir, "dataset_dir");
    require(csv_path, "csv_path");
    const int n = import_reviews(dataset_dir, csv_path);
    if (applied) *applied = n;
  });
}

nb_status nb_run(const nb_dataset* ds, const char* options_json, const char* report_path,
                 const char* trajectories_dir, char** out_report) {
  return guarded([&] {
    require(ds, "dataset");
    require(report_path, "report_path");
    const Json doc = options(options_json, "run options");
    const JsonReader j(doc, "");
    RunOptions o;
    o.sim = sim_config(j);
    if (auto f = j.optional_field("agent")) {
      const auto k = parse_agent_kind(f->string());
      if (!k) f->fail("expected oracle_follower, random or greedy");
      o.agent = *k;
    }
    if (auto f = j.optional_field("seed")) o.seed = static_cast<std::uint64_t>(f->integer());
    if (auto f = j.optional_field("threads")) o.threads = static_cast<int>(f->integer());
    std::vector<const Episode*> selected;
    if (auto f = j.optional_field("episodes")) {
      for (const auto& id : f->array()) {
        const Episode* e = ds->ds->find(id.string());
        if (!e) throw Error(ErrorCode::kUnknownEpisode, "no episode '" + id.string() + "'");
        selected.push_back(e);
      }
    } else {
      std::optional<std::string> split;
      if (auto f = j.optional_field("split")) split = f->string();
      for (const auto& e : ds->ds->episodes) {
        if (!split || ds->ds->split_of.at(e.episode_id) == *split) selected.push_back(&e);
      }
      if (selected.empty() && split) throw Error(ErrorCode::kInvalidArgument, "split '" + *split + "' has no episodes");
    }
    const RunOutput run = run_episodes(*ds->ds, selected, o);
    if (trajectories_dir) {
      write_dir_atomically(trajectories_dir, ".navbench-trajectories", [&](const std::string& dir) {
        fs::create_directories(dir);
        write_text_file((fs::path(dir) / ".navbench-trajectories").string(), "");
        for (const auto& t : run.trajectories) {
          write_text_file((fs::path(dir) / (t.episode_id + ".json")).string(), trajectory_to_json(t).dump() + "\n");
        }
      });
    }
    try {
      write_report_files(run.report, report_path);
    } catch (...) {
      std::error_code ec;
      if (trajectories_dir) fs::remove_all(trajectories_dir, ec);
      throw;
    }
    put(out_report, report_to_json(run.report).dump(2));
  });
}

nb_status nb_eval(const nb_dataset* ds, const char* trajectories_path, const char* options_json,
                  const char* report_path, char** out_report) {
  return guarded([&] {
    require(ds, "dataset");
    require(trajectories_path, "trajectories_path");
    const Json doc = options(options_json, "eval options");
    const JsonReader j(doc, "");
    const SimConfig sim = sim_config(j);
    const std::string agent = j.has("agent") ? j.field("agent").string() : "offline";
    const auto trajectories = load_trajectories(trajectories_path, sim.mode);
    SimConfig echo = sim;
    echo.mode = trajectories.front().mode;
    const double res = ds->ds->scenes.empty() ? 0.05 : ds->ds->scenes.begin()->second->nav_params().resolution;
    const MetricsReport report = evaluate_trajectories(*ds->ds, trajectories, report_config(echo, agent, res));
    if (report_path) write_report_files(report, report_path);
    put(out_report, report_to_json(report).dump(2));
  });
}

nb_status nb_sim_create(const nb_dataset* ds, const char* episode_id, const char* config_json, nb_sim** out) {
  return guarded([&] {
    require(ds, "dataset");
    require(episode_id, "episode_id");
    require(out, "out");
    const Episode* e = ds->ds->find(episode_id);
    if (!e) throw Error(ErrorCode::kUnknownEpisode, std::string("no episode '") + episode_id + "'");
    const Json doc = options(config_json, "sim config");
    SimConfig cfg = sim_config(JsonReader(doc, ""));
    cfg.success_thresh = e->success_thresh;
    auto h = std::make_unique<nb_sim>();
    h->ds = ds->ds;
    h->episode = e;
    h->ctx = ds->ds->scene_for(*e);
    h->sim.emplace(h->ctx, cfg);
    *out = h.release();
  });
}

nb_status nb_sim_reset(nb_sim* sim, char** out_observation) {
  return guarded([&] {
    require(sim, "sim");
    put(out_observation, observation_to_json(sim->sim->reset(*sim->episode)).dump());
  });
}

nb_status nb_sim_step(nb_sim* sim, const char* action_json, char** out_step) {
  return guarded([&] {
    require(sim, "sim");
    require(action_json, "action_json");
    const Json doc = parse_json(action_json, "action");
    const StepResult r = sim->sim->step(action_from_json(JsonReader(doc, "action")));
    put(out_step, Json{{"observation", observation_to_json(r.observation)},
                       {"done", r.done},
                       {"done_reason", std::string(done_reason_name(r.done_reason))},
                       {"collided", r.collided},
                       {"blocked_displacement", r.blocked_displacement}}
                      .dump());
  });
}

int nb_sim_done(const nb_sim* sim) { return sim && sim->sim->done() ? 1 : 0; }

nb_status nb_sim_trajectory(const nb_sim* sim, char** out) {
  return guarded([&] {
    require(sim, "sim");
    require(out, "out");
    put(out, trajectory_to_json(sim->sim->trajectory()).dump());
  });
}

nb_status nb_sim_trajectory_csv(const nb_sim* sim, char** out) {
  return guarded([&] {
    require(sim, "sim");
    require(out, "out");
    put(out, trajectory_to_csv(sim->sim->trajectory()));
  });
}

nb_status nb_sim_score(const nb_sim* sim, char** out) {
  return guarded([&] {
    require(sim, "sim");
    require(out, "out");
    put(out, episode_result_to_json(score_episode(*sim->episode, sim->sim->trajectory(), *sim->ctx)).dump());
  });
}

void nb_sim_free(nb_sim* sim) { delete sim; }

nb_status nb_session_create(const nb_dataset* ds, const char* session_id, const char* options_json,
                            nb_session** out) {
  return guarded([&] {
    require(ds, "dataset");
    require(out, "out");
    const Json doc = options(options_json, "session options");
    SessionOptions o = session_options(*ds->ds, JsonReader(doc, ""));
    *out = new nb_session{ds->ds, std::make_unique<Session>(ds->ds, session_id ? session_id : "s1", std::move(o))};
  });
}

nb_status nb_session_handle(nb_session* session, const char* line, char** out_reply) {
  return guarded([&] {
    require(session, "session");
    require(line, "line");
    require(out_reply, "out_reply");
    put(out_reply, session->session->handle(line));
  });
}

void nb_session_free(nb_session* session) { delete session; }

nb_status nb_serve_stdio(const nb_dataset* ds, const char* options_json) {
  return guarded([&] {
    require(ds, "dataset");
    const Json doc = options(options_json, "session options");
    Session session(ds->ds, "s1", session_options(*ds->ds, JsonReader(doc, "")));
    serve_stream(session, std::cin, std::cout);
  });
}

nb_status nb_server_start(const nb_dataset* ds, const char* listen, const char* options_json, nb_server** out) {
  return guarded([&] {
    require(ds, "dataset");
    require(listen, "listen");
    require(out, "out");
    const Json doc = options(options_json, "server options");
    const JsonReader j(doc, "");
    ServerOptions o;
    o.listen = parse_listen_address(listen);
    o.session = session_options(*ds->ds, j);
    o.stop_after_first_done = j.has("human_session_dir");
    auto h = std::make_unique<nb_server>();
    h->ds = ds->ds;
    h->server = std::make_unique<Server>(ds->ds, std::move(o));
    h->server->start();
    *out = h.release();
  });
}

int nb_server_port(const nb_server* server) { return server ? server->server->port() : -1; }

nb_status nb_server_run(nb_server* server) {
  return guarded([&] {
    require(server, "server");
    server->server->run();
  });
}

void nb_server_stop(nb_server* server) {
  if (server) server->server->stop();
}

void nb_server_free(nb_server* server) { delete server; }

}  // extern "C"
