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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "geometry/types.hpp"

namespace navbench {

using Json = nlohmann::ordered_json;

// Parses text, raising Error(kParseError) with "<source>:<line>:<col>" on
// syntax errors.
Json parse_json(const std::string& text, const std::string& source);

std::string read_text_file(const std::string& path);
// Writes via a temporary sibling and renames, so readers never observe a
// partially written file.
void write_text_file(const std::string& path, const std::string& text);

Json point_to_json(WorldPoint p);

// Typed view over a JSON value that remembers its field path for
// diagnostics ("objects[3].base_height: expected number").
class JsonReader {
 public:
  JsonReader(const Json& value, std::string path) : value_(&value), path_(std::move(path)) {}

  const Json& raw() const { return *value_; }
  const std::string& path() const { return path_; }

  JsonReader field(const char* key) const;
  std::optional<JsonReader> optional_field(const char* key) const;
  bool has(const char* key) const;

  double number() const;
  std::int64_t integer() const;
  std::string string() const;
  bool boolean() const;
  std::vector<JsonReader> array() const;
  WorldPoint point() const;

  [[noreturn]] void fail(const std::string& what) const;

 private:
  const Json* value_;
  std::string path_;
};

}  // namespace navbench
