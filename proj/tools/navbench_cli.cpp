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

// Command-line front end over the C API.

#include <pthread.h>
#include <signal.h>

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "navbench/navbench.h"

namespace {

using Json = nlohmann::ordered_json;

// Failures surface as exactly one JSON line on stderr.
struct Failure {
  std::string code;
  std::string message;
};

void check(nb_status s) {
  if (s != NB_OK) throw Failure{nb_status_name(s), nb_last_error_message()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  nb_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw Failure{"io_error", path + ": cannot open"};
  std::string out;
  char buf[8192];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0) out.append(buf, n);
  std::fclose(f);
  return out;
}

class Dataset {
 public:
  explicit Dataset(const std::string& dir) { check(nb_dataset_load(dir.c_str(), &ds_)); }
  ~Dataset() { nb_dataset_free(ds_); }
  Dataset(const Dataset&) = delete;
  Dataset& operator=(const Dataset&) = delete;
  const nb_dataset* get() const { return ds_; }

 private:
  nb_dataset* ds_ = nullptr;
};

// Stops the server on SIGINT/SIGTERM. Signals are blocked in every thread
// and picked up here with sigtimedwait.
class SignalWatcher {
 public:
  explicit SignalWatcher(nb_server* server) {
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);
    thread_ = std::thread([this, server, set] {
      const timespec tick{0, 200'000'000};
      while (!done_) {
        if (sigtimedwait(&set, nullptr, &tick) > 0) {
          nb_server_stop(server);
          return;
        }
      }
    });
  }
  ~SignalWatcher() {
    done_ = true;
    thread_.join();
  }

 private:
  std::atomic<bool> done_{false};
  std::thread thread_;
};

void print_summary(const std::string& report_json) {
  const Json r = Json::parse(report_json);
  std::cout << r.at("aggregates").dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"navbench: scene generation, episodes, simulation, evaluation and the agent service"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nb_version()));

  // gen-scenes
  int count = 10;
  std::uint64_t seed = 0;
  std::string out, params_path;
  auto* gen_scenes = app.add_subcommand("gen-scenes", "Generate procedural floor plans");
  gen_scenes->add_option("--count", count, "Number of scenes")->check(CLI::PositiveNumber);
  gen_scenes->add_option("--seed", seed, "Random seed");
  gen_scenes->add_option("--out", out, "Output directory")->required();
  gen_scenes->add_option("--params", params_path, "Generator parameters (JSON file)")->check(CLI::ExistingFile);

  // gen-episodes
  std::string scenes_dir;
  std::vector<std::string> tasks;
  int fine_per_scene = 4, coarse_per_scene = 4, lh_per_scene = 2, threads = 1;
  bool refine = false;
  auto* gen_episodes = app.add_subcommand("gen-episodes", "Sample episodes and write a dataset");
  gen_episodes->add_option("--scenes", scenes_dir, "Scene directory")->required()->check(CLI::ExistingDirectory);
  gen_episodes->add_option("--tasks", tasks, "Task types (fine,coarse,visual_ref,long_horizon,dialogue)")
      ->delimiter(',');
  gen_episodes->add_option("--seed", seed, "Random seed");
  gen_episodes->add_option("--out", out, "Dataset directory")->required();
  gen_episodes->add_option("--fine-per-scene", fine_per_scene)->check(CLI::NonNegativeNumber);
  gen_episodes->add_option("--coarse-per-scene", coarse_per_scene)->check(CLI::NonNegativeNumber);
  gen_episodes->add_option("--long-horizon-per-scene", lh_per_scene)->check(CLI::NonNegativeNumber);
  gen_episodes->add_option("--threads", threads)->check(CLI::PositiveNumber);
  gen_episodes->add_flag("--refine", refine, "Refine coarse instructions via REFINEMENT_ENDPOINT");

  // run
  std::string dataset, agent = "oracle_follower", mode = "strict", report, trajectories, split;
  std::vector<std::string> episodes;
  int max_steps = 200;
  auto* run = app.add_subcommand("run", "Run a baseline agent over a dataset and score it");
  run->add_option("--dataset", dataset)->required()->check(CLI::ExistingDirectory);
  run->add_option("--agent", agent)->check(CLI::IsMember({"oracle_follower", "random", "greedy"}));
  run->add_option("--mode", mode)->check(CLI::IsMember({"strict", "telhop"}));
  run->add_option("--report", report, "Report JSON path; a CSV is written alongside")->required();
  run->add_option("--trajectories", trajectories, "Directory for per-episode trajectory JSON");
  run->add_option("--split", split, "Only episodes of this split");
  run->add_option("--episodes", episodes, "Only these episode ids")->delimiter(',');
  run->add_option("--seed", seed);
  run->add_option("--threads", threads)->check(CLI::PositiveNumber);
  run->add_option("--max-steps", max_steps)->check(CLI::PositiveNumber);

  // eval
  auto* eval = app.add_subcommand("eval", "Score logged trajectories (JSON or t,x,y,yaw CSV)");
  eval->add_option("--dataset", dataset)->required()->check(CLI::ExistingDirectory);
  eval->add_option("--trajectories", trajectories, "Trajectory file or directory")->required()->check(CLI::ExistingPath);
  eval->add_option("--report", report, "Report JSON path; a CSV is written alongside")->required();
  eval->add_option("--mode", mode, "Mode recorded for CSV input")->check(CLI::IsMember({"strict", "telhop"}));

  // serve
  std::string listen = "127.0.0.1:8765";
  bool use_stdio = false;
  auto* serve = app.add_subcommand("serve", "Serve the wire protocol over a socket or stdin/stdout");
  serve->add_option("--dataset", dataset)->required()->check(CLI::ExistingDirectory);
  serve->add_option("--listen", listen, "host:port");
  serve->add_flag("--stdio", use_stdio, "One message per line on stdin/stdout");
  serve->add_option("--mode", mode)->check(CLI::IsMember({"strict", "telhop"}));
  serve->add_option("--max-steps", max_steps)->check(CLI::PositiveNumber);

  // human-session
  std::string episode;
  auto* human = app.add_subcommand("human-session", "Serve one episode to a teleop client and log it");
  human->add_option("--dataset", dataset)->required()->check(CLI::ExistingDirectory);
  human->add_option("--episode", episode)->required();
  human->add_option("--listen", listen, "host:port");
  human->add_option("--out", out, "Directory for the CSV, trajectory and report")->required();
  human->add_option("--mode", mode)->check(CLI::IsMember({"strict", "telhop"}));
  human->add_option("--max-steps", max_steps)->check(CLI::PositiveNumber);

  // import-reviews
  std::string csv;
  auto* reviews = app.add_subcommand("import-reviews", "Record reviewer scores in a dataset manifest");
  reviews->add_option("--dataset", dataset)->required()->check(CLI::ExistingDirectory);
  reviews->add_option("--csv", csv, "episode_id,score[,verified]")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << Json{{"error", "invalid_argument"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }

  try {
    if (*gen_scenes) {
      const std::string params = params_path.empty() ? "" : read_file(params_path);
      check(nb_generate_scenes(params.c_str(), count, seed, out.c_str()));
      std::cout << Json{{"scenes", count}, {"out", out}}.dump() << "\n";
    } else if (*gen_episodes) {
      Json o{{"seed", seed},
             {"fine_per_scene", fine_per_scene},
             {"coarse_per_scene", coarse_per_scene},
             {"long_horizon_per_scene", lh_per_scene},
             {"threads", threads},
             {"refine", refine}};
      if (!tasks.empty()) o["tasks"] = tasks;
      check(nb_generate_dataset(scenes_dir.c_str(), o.dump().c_str(), out.c_str()));
      Dataset ds(out);
      char* ids = nullptr;
      check(nb_dataset_episode_ids(ds.get(), &ids));
      std::cout << Json{{"episodes", Json::parse(take(ids)).size()}, {"out", out}}.dump() << "\n";
    } else if (*run) {
      Dataset ds(dataset);
      Json o{{"agent", agent}, {"mode", mode}, {"seed", seed}, {"threads", threads}, {"max_steps", max_steps}};
      if (!split.empty()) o["split"] = split;
      if (!episodes.empty()) o["episodes"] = episodes;
      char* rep = nullptr;
      check(nb_run(ds.get(), o.dump().c_str(), report.c_str(), trajectories.empty() ? nullptr : trajectories.c_str(),
                   &rep));
      print_summary(take(rep));
    } else if (*eval) {
      Dataset ds(dataset);
      char* rep = nullptr;
      check(nb_eval(ds.get(), trajectories.c_str(), Json{{"mode", mode}}.dump().c_str(), report.c_str(), &rep));
      print_summary(take(rep));
    } else if (*serve) {
      Dataset ds(dataset);
      const std::string o = Json{{"mode", mode}, {"max_steps", max_steps}}.dump();
      if (use_stdio) {
        check(nb_serve_stdio(ds.get(), o.c_str()));
      } else {
        nb_server* server = nullptr;
        check(nb_server_start(ds.get(), listen.c_str(), o.c_str(), &server));
        std::cerr << "listening on port " << nb_server_port(server) << std::endl;
        nb_status s;
        {
          SignalWatcher watcher(server);
          s = nb_server_run(server);
        }
        nb_server_free(server);
        check(s);
      }
    } else if (*human) {
      Dataset ds(dataset);
      const std::string o =
          Json{{"mode", mode}, {"max_steps", max_steps}, {"episode", episode}, {"human_session_dir", out}}.dump();
      nb_server* server = nullptr;
      check(nb_server_start(ds.get(), listen.c_str(), o.c_str(), &server));
      std::cerr << "waiting for a client for episode " << episode << " on port " << nb_server_port(server)
                << std::endl;
      nb_status s;
      {
        SignalWatcher watcher(server);
        s = nb_server_run(server);
      }
      nb_server_free(server);
      check(s);
      std::cout << Json{{"episode", episode}, {"out", out}}.dump() << "\n";
    } else if (*reviews) {
      int applied = 0;
      check(nb_import_reviews(dataset.c_str(), csv.c_str(), &applied));
      std::cout << Json{{"applied", applied}}.dump() << "\n";
    }
  } catch (const Failure& f) {
    std::cerr << Json{{"error", f.code}, {"message", f.message}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
