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

// Shared by the unit tests and the acceptance binary, so no gtest here.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "common/json_util.hpp"
#include "common/rng.hpp"
#include "eval/scoring.hpp"
#include "service/agents.hpp"
#include "tasks/dataset.hpp"

namespace navbench::harness {

// One request line in, exactly one reply line out.
using Transport = std::function<std::string(const std::string&)>;

// Checks envelope shape and that the reply's seq is `expected_seq`. Returns
// the problem, or nullopt.
std::optional<std::string> check_reply(const std::string& line, std::int64_t expected_seq);

Observation observation_from_json(const Json& j);

std::string envelope(const std::string& kind, std::int64_t seq, const std::string& session_id, const Json& payload);

struct LiveEpisode {
  Json done;                 // payload of the final done message
  std::vector<Json> replies;  // every reply, in order
};

// hello (when session_id is empty), reset and the agent loop over `send`.
// Throws std::runtime_error on any unexpected reply.
LiveEpisode drive_episode(const Transport& send, const LoadedDataset& ds, const Episode& episode, AgentKind agent,
                          SimMode mode, std::uint64_t seed, std::int64_t& seq, std::string& session_id);

// Field-for-field comparison of the live metrics against the eval module
// run on the logged trajectory, plus the CSV path (pose-only fields). Returns
// the first difference.
std::optional<std::string> compare_live_offline(const LoadedDataset& ds, const Json& done,
                                                const ReportConfig& config);

struct FuzzStats {
  int messages = 0;
  int replies = 0;
  int bad_replies = 0;
  int progress = 0;  // non-error replies
  std::map<std::string, int> error_codes;
  std::vector<std::string> problems;  // first few
};

// Feeds `count` generated messages, mostly well-formed with targeted
// mutations, some garbage, to fresh sessions of `per_session` messages.
FuzzStats fuzz_sessions(std::shared_ptr<const LoadedDataset> ds, int count, int per_session, std::uint64_t seed);

// Minimal blocking client over a loopback socket. Reads give up after 10 s.
class LoopbackClient {
 public:
  explicit LoopbackClient(int port);
  ~LoopbackClient();
  LoopbackClient(const LoopbackClient&) = delete;
  LoopbackClient& operator=(const LoopbackClient&) = delete;

  void send_raw(const std::string& data);
  // Up to `n` more bytes; fewer on timeout or close.
  std::string read_bytes(std::size_t n);
  // Without the newline; empty on timeout or close.
  std::string read_line();
  std::string request(const std::string& line);
  bool closed_by_peer();

 private:
  bool fill();

  int fd_ = -1;
  std::string buf_;
};

// Writes `scenes` generated scenes and their dataset under `dir` and loads it.
std::shared_ptr<const LoadedDataset> make_dataset(const std::string& dir, int scenes, std::uint64_t seed);

}  // namespace navbench::harness
