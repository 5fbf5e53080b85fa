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

#include "service/server.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <openssl/evp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <istream>
#include <ostream>

#include "common/error.hpp"

namespace navbench {
namespace {

constexpr const char* kWsGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";

bool write_all(int fd, const std::string& data) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    off += static_cast<std::size_t>(n);
  }
  return true;
}

// Buffered reader over a socket.
class Reader {
 public:
  explicit Reader(int fd) : fd_(fd) {}

  // Returns false on EOF/error.
  bool fill() {
    char buf[16384];
    for (;;) {
      const ssize_t n = ::recv(fd_, buf, sizeof(buf), 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) return false;
      data_.append(buf, static_cast<std::size_t>(n));
      return true;
    }
  }

  bool read_exact(std::size_t n, std::string& out) {
    while (data_.size() - pos_ < n) {
      compact();
      if (!fill()) return false;
    }
    out.assign(data_, pos_, n);
    pos_ += n;
    return true;
  }

  std::string& buffer() { return data_; }
  std::size_t& pos() { return pos_; }

  void compact() {
    if (pos_ > 0) {
      data_.erase(0, pos_);
      pos_ = 0;
    }
  }

 private:
  int fd_;
  std::string data_;
  std::size_t pos_ = 0;
};

std::string base64(const unsigned char* data, int n) {
  std::string out(static_cast<std::size_t>(4 * ((n + 2) / 3)), '\0');
  const int len = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), data, n);
  out.resize(static_cast<std::size_t>(len));
  return out;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void serve_lines(Session& session, Reader& reader, int fd, const std::function<bool(const std::string&)>& after) {
  bool discarding = false;
  for (;;) {
    std::string& buf = reader.buffer();
    const std::size_t nl = buf.find('\n', reader.pos());
    if (nl == std::string::npos) {
      if (buf.size() - reader.pos() > kMaxMessageBytes) {
        // Oversized line: answer once, then skip to the next newline.
        if (!discarding) {
          const std::string r = session.reject_oversized();
          if (!write_all(fd, r + "\n")) return;
          discarding = true;
        }
        buf.clear();
        reader.pos() = 0;
      }
      reader.compact();
      if (!reader.fill()) return;
      continue;
    }
    std::string line = buf.substr(reader.pos(), nl - reader.pos());
    reader.pos() = nl + 1;
    if (discarding) {
      discarding = false;
      continue;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::string reply = session.handle(line);
    if (!write_all(fd, reply + "\n")) return;
    if (!after(reply)) return;
  }
}

void serve_websocket(Session& session, Reader& reader, int fd, const std::function<bool(const std::string&)>& after) {
  std::string message;
  int message_opcode = -1;
  for (;;) {
    std::string head;
    if (!reader.read_exact(2, head)) return;
    const auto b0 = static_cast<unsigned char>(head[0]);
    const auto b1 = static_cast<unsigned char>(head[1]);
    const bool fin = (b0 & 0x80) != 0;
    const int opcode = b0 & 0x0f;
    const bool masked = (b1 & 0x80) != 0;
    std::uint64_t len = b1 & 0x7f;
    std::string ext;
    if (len == 126) {
      if (!reader.read_exact(2, ext)) return;
      len = (static_cast<std::uint64_t>(static_cast<unsigned char>(ext[0])) << 8) | static_cast<unsigned char>(ext[1]);
    } else if (len == 127) {
      if (!reader.read_exact(8, ext)) return;
      len = 0;
      for (char c : ext) len = (len << 8) | static_cast<unsigned char>(c);
    }
    if (!masked || len > kMaxMessageBytes || message.size() + len > kMaxMessageBytes) {
      // 1002 protocol error / 1009 too big
      const std::uint16_t code = masked ? 1009 : 1002;
      write_all(fd, encode_ws_frame(0x8, std::string{static_cast<char>(code >> 8), static_cast<char>(code & 0xff)}));
      return;
    }
    std::string mask;
    if (!reader.read_exact(4, mask)) return;
    std::string payload;
    if (!reader.read_exact(static_cast<std::size_t>(len), payload)) return;
    for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = static_cast<char>(payload[i] ^ mask[i % 4]);
    reader.compact();

    if (opcode == 0x8) {
      write_all(fd, encode_ws_frame(0x8, payload.substr(0, 2)));
      return;
    }
    if (opcode == 0x9) {
      if (!write_all(fd, encode_ws_frame(0xA, payload))) return;
      continue;
    }
    if (opcode == 0xA) continue;
    if (opcode == 0x1 || opcode == 0x2) {
      message = payload;
      message_opcode = opcode;
    } else if (opcode == 0x0 && message_opcode >= 0) {
      message += payload;
    } else {
      write_all(fd, encode_ws_frame(0x8, std::string{static_cast<char>(1002 >> 8), static_cast<char>(1002 & 0xff)}));
      return;
    }
    if (!fin) continue;
    message_opcode = -1;
    // A frame may carry several newline-separated messages.
    std::size_t start = 0;
    while (start <= message.size()) {
      std::size_t nl = message.find('\n', start);
      if (nl == std::string::npos) nl = message.size();
      std::string line = message.substr(start, nl - start);
      start = nl + 1;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (trim(line).empty()) continue;
      const std::string reply = session.handle(line);
      if (!write_all(fd, encode_ws_frame(0x1, reply))) return;
      if (!after(reply)) return;
    }
    message.clear();
  }
}

}  // namespace

ListenAddress parse_listen_address(const std::string& text) {
  ListenAddress a;
  std::string port_text = text;
  if (const auto colon = text.rfind(':'); colon != std::string::npos) {
    if (colon > 0) a.host = text.substr(0, colon);
    port_text = text.substr(colon + 1);
  }
  int port = -1;
  const auto res = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (port_text.empty() || res.ec != std::errc() || res.ptr != port_text.data() + port_text.size() || port < 0 ||
      port > 65535) {
    throw Error(ErrorCode::kInvalidArgument, "listen address '" + text + "' must be host:port");
  }
  a.port = port;
  return a;
}

std::string websocket_accept_key(const std::string& client_key) {
  const std::string src = client_key + kWsGuid;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int n = 0;
  EVP_Digest(src.data(), src.size(), digest, &n, EVP_sha1(), nullptr);
  return base64(digest, static_cast<int>(n));
}

std::string encode_ws_frame(int opcode, const std::string& payload, bool mask) {
  std::string f;
  f.push_back(static_cast<char>(0x80 | (opcode & 0x0f)));
  const std::uint64_t n = payload.size();
  const unsigned char mbit = mask ? 0x80 : 0;
  if (n < 126) {
    f.push_back(static_cast<char>(mbit | n));
  } else if (n <= 0xffff) {
    f.push_back(static_cast<char>(mbit | 126));
    f.push_back(static_cast<char>(n >> 8));
    f.push_back(static_cast<char>(n & 0xff));
  } else {
    f.push_back(static_cast<char>(mbit | 127));
    for (int i = 7; i >= 0; --i) f.push_back(static_cast<char>((n >> (8 * i)) & 0xff));
  }
  if (!mask) return f + payload;
  const char key[4] = {0x12, 0x34, 0x56, 0x78};
  f.append(key, 4);
  for (std::size_t i = 0; i < payload.size(); ++i) f.push_back(static_cast<char>(payload[i] ^ key[i % 4]));
  return f;
}

void serve_stream(Session& session, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    out << session.handle(line) << '\n' << std::flush;
  }
}

Server::Server(std::shared_ptr<const LoadedDataset> dataset, ServerOptions options)
    : dataset_(std::move(dataset)), options_(std::move(options)) {}

Server::~Server() {
  stop();
  for (auto& t : workers_) {
    if (t.joinable()) t.join();
  }
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void Server::start() {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE | AI_NUMERICSERV;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(options_.listen.port);
  if (const int rc = ::getaddrinfo(options_.listen.host.c_str(), port.c_str(), &hints, &res); rc != 0) {
    throw Error(ErrorCode::kIoError, "cannot resolve '" + options_.listen.host + "': " + gai_strerror(rc));
  }
  std::string why = "no address";
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 64) == 0) {
      listen_fd_ = fd;
      break;
    }
    why = std::strerror(errno);
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (listen_fd_ < 0) {
    throw Error(ErrorCode::kIoError, "cannot listen on " + options_.listen.host + ":" + port + ": " + why);
  }
  sockaddr_storage addr{};
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = addr.ss_family == AF_INET6 ? ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port)
                                     : ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
}

void Server::run() {
  if (listen_fd_ < 0) start();
  while (!stopping_) {
    pollfd p{listen_fd_, POLLIN, 0};
    const int r = ::poll(&p, 1, 100);
    if (r <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    std::lock_guard<std::mutex> lock(mu_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    open_fds_.push_back(fd);
    workers_.emplace_back([this, fd] { serve_connection(fd); });
  }
  std::vector<std::thread> workers;
  {
    std::lock_guard<std::mutex> lock(mu_);
    workers.swap(workers_);
  }
  for (auto& t : workers) t.join();
}

void Server::stop() {
  stopping_ = true;
  std::lock_guard<std::mutex> lock(mu_);
  for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
}

std::string Server::next_session_id() { return "s" + std::to_string(++session_counter_); }

void Server::serve_connection(int fd) {
  Session session(dataset_, next_session_id(), options_.session);
  const auto after = [&](const std::string&) {
    if (options_.stop_after_first_done && session.finished_one()) {
      stop();
      return false;
    }
    return !stopping_;
  };
  Reader reader(fd);
  try {
    if (reader.fill()) {
      const std::string& buf = reader.buffer();
      if (buf.rfind("GET ", 0) == 0) {
        std::size_t end;
        while ((end = buf.find("\r\n\r\n")) == std::string::npos && buf.size() < 16384) {
          if (!reader.fill()) break;
        }
        end = buf.find("\r\n\r\n");
        std::string key;
        bool upgrade = false;
        if (end != std::string::npos) {
          std::size_t pos = buf.find("\r\n") + 2;
          while (pos < end) {
            const std::size_t eol = buf.find("\r\n", pos);
            const std::string h = buf.substr(pos, eol - pos);
            pos = eol + 2;
            const auto colon = h.find(':');
            if (colon == std::string::npos) continue;
            const std::string name = lower(trim(h.substr(0, colon)));
            const std::string value = trim(h.substr(colon + 1));
            if (name == "sec-websocket-key") key = value;
            if (name == "upgrade" && lower(value) == "websocket") upgrade = true;
          }
        }
        if (!upgrade || key.empty()) {
          write_all(fd, "HTTP/1.1 400 Bad Request\r\nContent-Length: 0\r\nConnection: close\r\n\r\n");
        } else {
          reader.pos() = end + 4;
          reader.compact();
          write_all(fd, "HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\nConnection: Upgrade\r\n"
                        "Sec-WebSocket-Accept: " + websocket_accept_key(key) + "\r\n\r\n");
          serve_websocket(session, reader, fd, after);
        }
      } else {
        serve_lines(session, reader, fd, after);
      }
    }
  } catch (...) {
    // Session::handle never throws; anything here is a transport failure.
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    open_fds_.erase(std::remove(open_fds_.begin(), open_fds_.end(), fd), open_fds_.end());
  }
  ::shutdown(fd, SHUT_RDWR);
  ::close(fd);
}

}  // namespace navbench
