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

#include "common/json_util.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "common/error.hpp"

namespace navbench {

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string message = e.what();
    if (auto pos = message.find("syntax error"); pos != std::string::npos) {
      message = message.substr(pos);
    }
    throw Error(ErrorCode::kParseError,
                source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + message);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw Error(ErrorCode::kIoError, "short write to '" + path + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw Error(ErrorCode::kIoError, "cannot move '" + tmp + "' into place: " + ec.message());
  }
}

Json point_to_json(WorldPoint p) { return Json::array({p.x, p.y}); }

JsonReader JsonReader::field(const char* key) const {
  if (!value_->is_object()) fail("expected object");
  auto it = value_->find(key);
  if (it == value_->end()) {
    JsonReader(*value_, path_.empty() ? key : path_ + "." + key).fail("missing required field");
  }
  return JsonReader(*it, path_.empty() ? key : path_ + "." + key);
}

std::optional<JsonReader> JsonReader::optional_field(const char* key) const {
  if (!value_->is_object()) fail("expected object");
  auto it = value_->find(key);
  if (it == value_->end() || it->is_null()) return std::nullopt;
  return JsonReader(*it, path_.empty() ? key : path_ + "." + key);
}

bool JsonReader::has(const char* key) const {
  return value_->is_object() && value_->contains(key) && !(*value_)[key].is_null();
}

double JsonReader::number() const {
  if (!value_->is_number()) fail("expected number");
  const double v = value_->get<double>();
  if (!std::isfinite(v)) fail("expected finite number");
  return v;
}

std::int64_t JsonReader::integer() const {
  if (!value_->is_number_integer()) fail("expected integer");
  return value_->get<std::int64_t>();
}

std::string JsonReader::string() const {
  if (!value_->is_string()) fail("expected string");
  return value_->get<std::string>();
}

bool JsonReader::boolean() const {
  if (!value_->is_boolean()) fail("expected boolean");
  return value_->get<bool>();
}

std::vector<JsonReader> JsonReader::array() const {
  if (!value_->is_array()) fail("expected array");
  std::vector<JsonReader> out;
  out.reserve(value_->size());
  for (std::size_t i = 0; i < value_->size(); ++i) {
    out.emplace_back((*value_)[i], path_ + "[" + std::to_string(i) + "]");
  }
  return out;
}

WorldPoint JsonReader::point() const {
  auto items = array();
  if (items.size() != 2) fail("expected [x, y]");
  return {items[0].number(), items[1].number()};
}

void JsonReader::fail(const std::string& what) const {
  throw Error(ErrorCode::kParseError, "field '" + (path_.empty() ? std::string("<root>") : path_) + "': " + what);
}

}  // namespace navbench
