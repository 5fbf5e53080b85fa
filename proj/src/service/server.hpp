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

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "service/session.hpp"

namespace navbench {

struct ListenAddress {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 picks an ephemeral port
};

// "host:port" or ":port" or "port".
ListenAddress parse_listen_address(const std::string& text);

struct ServerOptions {
  ListenAddress listen;
  SessionOptions session;
  // Stop accepting and close all connections once any session reports done
  // (human-session).
  bool stop_after_first_done = false;
};

// Accepts plain line-delimited connections and WebSocket upgrades on the same
// port. One thread and one Session per connection.
class Server {
 public:
  Server(std::shared_ptr<const LoadedDataset> dataset, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and listens. Throws kIoError on failure.
  void start();
  int port() const { return port_; }
  // Accept loop. Returns after stop().
  void run();
  void stop();
  bool stopping() const { return stopping_; }

 private:
  void serve_connection(int fd);
  std::string next_session_id();

  std::shared_ptr<const LoadedDataset> dataset_;
  ServerOptions options_;
  int listen_fd_ = -1;
  int port_ = 0;
  std::atomic<bool> stopping_{false};
  std::atomic<std::uint64_t> session_counter_{0};
  std::mutex mu_;
  std::vector<int> open_fds_;
  std::vector<std::thread> workers_;
};

// Standard-stream mode: one message per input line, one reply per output line.
// Returns at end of input.
void serve_stream(Session& session, std::istream& in, std::ostream& out);

// Handshake helpers, exposed for tests.
std::string websocket_accept_key(const std::string& client_key);
std::string encode_ws_frame(int opcode, const std::string& payload, bool mask = false);

}  // namespace navbench
