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

#ifndef NAVBENCH_NAVBENCH_H_
#define NAVBENCH_NAVBENCH_H_

#include <stdint.h>

#if defined(_WIN32)
#define NB_API __declspec(dllexport)
#else
#define NB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every call returns NB_OK or an error; the message for the last error on
 * the calling thread is available from nb_last_error_message(). Strings
 * returned through char** are owned by the caller and released with
 * nb_string_free(). Options are JSON objects; NULL or "" means defaults. */
typedef enum nb_status {
  NB_OK = 0,
  NB_INVALID_ARGUMENT = 1,
  NB_PARSE_ERROR,
  NB_INVARIANT_VIOLATION,
  NB_IO_ERROR,
  NB_GENERATION_FAILED,
  NB_SAMPLING_EXHAUSTED,
  NB_INVALID_EPISODE,
  NB_INVALID_ACTION,
  NB_UNSUPPORTED_ACTION,
  NB_EPISODE_FINISHED,
  NB_UNKNOWN_EPISODE,
  NB_ORACLE_DISABLED,
  NB_MISMATCHED_EPISODE,
  NB_UNREACHABLE,
  NB_CLIENT_TIMEOUT,
  NB_SCHEMA_INVALID,
  NB_INTERNAL
} nb_status;

typedef struct nb_scene nb_scene;
typedef struct nb_dataset nb_dataset;
typedef struct nb_sim nb_sim;
typedef struct nb_session nb_session;
typedef struct nb_server nb_server;

NB_API const char* nb_version(void);
/* "ok", "invalid_argument", ... */
NB_API const char* nb_status_name(nb_status status);
/* Empty string when the last call on this thread succeeded. */
NB_API const char* nb_last_error_message(void);
NB_API void nb_string_free(char* s);

/* Scenes. params_json takes the generator fields (min_rooms, max_rooms,
 * resolution, ...). */
NB_API nb_status nb_scene_generate(const char* params_json, uint64_t seed, const char* scene_id, nb_scene** out);
NB_API nb_status nb_scene_load(const char* path, nb_scene** out);
NB_API nb_status nb_scene_from_json(const char* json, nb_scene** out);
NB_API nb_status nb_scene_to_json(const nb_scene* scene, char** out);
NB_API nb_status nb_scene_save(const nb_scene* scene, const char* path);
/* Geodesic distance on the agent-radius grid; NB_UNREACHABLE if none. */
NB_API nb_status nb_scene_geodesic(const nb_scene* scene, double ax, double ay, double bx, double by, double* out);
NB_API void nb_scene_free(nb_scene* scene);

/* Writes count scenes and index.json into out_dir. */
NB_API nb_status nb_generate_scenes(const char* params_json, int count, uint64_t seed, const char* out_dir);

/* Builds a dataset from a scene directory. options_json: seed, tasks (list
 * of names), fine_per_scene, coarse_per_scene, long_horizon_per_scene,
 * success_thresh, threads, refine (bool, reads REFINEMENT_ENDPOINT and
 * REFINEMENT_TOKEN). */
NB_API nb_status nb_generate_dataset(const char* scenes_dir, const char* options_json, const char* out_dir);
NB_API nb_status nb_dataset_load(const char* dir, nb_dataset** out);
/* JSON array of episode ids, sorted. */
NB_API nb_status nb_dataset_episode_ids(const nb_dataset* ds, char** out);
NB_API nb_status nb_dataset_episode(const nb_dataset* ds, const char* episode_id, char** out);
NB_API void nb_dataset_free(nb_dataset* ds);
NB_API nb_status nb_import_reviews(const char* dataset_dir, const char* csv_path, int* applied);

/* Runs a baseline agent. options_json: agent, mode, seed, threads, split,
 * episodes (list of ids), max_steps. Writes the report JSON (and a CSV
 * next to it with the .csv extension) and, when trajectories_dir is not
 * NULL, one <episode_id>.json per episode. out_report may be NULL. */
NB_API nb_status nb_run(const nb_dataset* ds, const char* options_json, const char* report_path,
                        const char* trajectories_dir, char** out_report);
/* Scores logged trajectories (file or directory of .json / .csv).
 * options_json: mode (for CSV input), agent label. */
NB_API nb_status nb_eval(const nb_dataset* ds, const char* trajectories_path, const char* options_json,
                         const char* report_path, char** out_report);

/* Single simulator. config_json: mode, max_steps, collision_thresh,
 * allow_sliding. */
NB_API nb_status nb_sim_create(const nb_dataset* ds, const char* episode_id, const char* config_json, nb_sim** out);
NB_API nb_status nb_sim_reset(nb_sim* sim, char** out_observation);
/* action_json as in the wire protocol's action payload. */
NB_API nb_status nb_sim_step(nb_sim* sim, const char* action_json, char** out_step);
NB_API int nb_sim_done(const nb_sim* sim);
NB_API nb_status nb_sim_trajectory(const nb_sim* sim, char** out);
NB_API nb_status nb_sim_trajectory_csv(const nb_sim* sim, char** out);
NB_API nb_status nb_sim_score(const nb_sim* sim, char** out);
NB_API void nb_sim_free(nb_sim* sim);

/* Wire-protocol sessions. options_json: mode, max_steps, episode
 * (restrict to one id). */
NB_API nb_status nb_session_create(const nb_dataset* ds, const char* session_id, const char* options_json,
                                   nb_session** out);
/* Exactly one reply line per request line. */
NB_API nb_status nb_session_handle(nb_session* session, const char* line, char** out_reply);
NB_API void nb_session_free(nb_session* session);
/* Line protocol on stdin/stdout until end of input. */
NB_API nb_status nb_serve_stdio(const nb_dataset* ds, const char* options_json);

/* Socket server; listen is "host:port" (port 0 picks one). options_json as
 * for sessions, plus human_session_dir: when set together with episode, the
 * finished episode's CSV, trajectory and report are written there and the
 * server stops. */
NB_API nb_status nb_server_start(const nb_dataset* ds, const char* listen, const char* options_json,
                                 nb_server** out);
NB_API int nb_server_port(const nb_server* server);
/* Blocks until nb_server_stop() or, in human-session mode, the end of the
 * episode. */
NB_API nb_status nb_server_run(nb_server* server);
/* Safe to call from any thread. */
NB_API void nb_server_stop(nb_server* server);
NB_API void nb_server_free(nb_server* server);

#ifdef __cplusplus
}
#endif

#endif  /* NAVBENCH_NAVBENCH_H_ */
