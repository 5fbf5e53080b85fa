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

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "common/json_util.hpp"
#include "eval/scoring.hpp"
#include "sim/simulator.hpp"
#include "tasks/dataset.hpp"

namespace navbench {

inline constexpr int kProtocolVersion = 1;
inline constexpr std::size_t kMaxMessageBytes = 1 << 20;

struct SessionOptions {
  SimConfig sim;  // mode may be overridden per reset
  // When set, only this episode may be reset (human-study sessions).
  std::optional<std::string> only_episode;
  std::function<void(const Episode&, const Trajectory&, const EpisodeResult&)> on_done;
};

// One client conversation: hello -> reset -> (observation -> action)* ->
// done. Every call to handle() returns exactly one reply line (without the
// trailing newline) and never throws.
class Session {
 public:
  Session(std::shared_ptr<const LoadedDataset> dataset, std::string session_id, SessionOptions options = {});

  std::string handle(const std::string& line);
  // Reply for a line the transport dropped for exceeding kMaxMessageBytes.
  std::string reject_oversized();

  const std::string& session_id() const { return session_id_; }
  bool episode_active() const { return sim_.has_value() && !sim_->done(); }
  bool finished_one() const { return finished_; }

 private:
  Json dispatch(const std::string& kind, const JsonReader& payload, std::string& reply_kind);
  Json on_hello(const JsonReader& payload);
  Json on_reset(const JsonReader& payload);
  Json on_action(const JsonReader& payload, std::string& reply_kind);
  Json on_oracle_query(const JsonReader& payload);
  std::string reply(const std::string& kind, const Json& payload, std::optional<std::int64_t> reply_to);
  std::string error_reply(const std::string& code, const std::string& message, std::optional<std::int64_t> seq);

  std::shared_ptr<const LoadedDataset> dataset_;
  std::string session_id_;
  SessionOptions options_;
  bool greeted_ = false;
  bool finished_ = false;
  std::optional<std::int64_t> last_seq_;
  std::int64_t out_seq_ = 0;
  const Episode* episode_ = nullptr;
  SceneContextPtr ctx_;
  std::optional<Simulator> sim_;
};

Json observation_to_json(const Observation& o);
// Run-length encoding of the raw grid, row-major from row 0, runs
// alternating free/occupied starting with free.
Json grid_to_json(const OccupancyGrid& grid);

}  // namespace navbench
