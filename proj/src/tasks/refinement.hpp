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

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/json_util.hpp"
#include "tasks/episode.hpp"
#include "tasks/instructions.hpp"

namespace navbench {

enum class RefinementRole { kDescriber, kVerifier, kSynthesizer };
std::string_view refinement_role_name(RefinementRole r);

struct RefinementRequest {
  RefinementRole role;
  std::string prompt;
  Json context;
};

// External text generator. Implementations throw Error(kClientTimeout) or
// Error(kSchemaInvalid); any other exception is treated the same way.
class RefinementClient {
 public:
  virtual ~RefinementClient() = default;
  virtual std::string complete(const RefinementRequest& request) = 0;
};

struct RefinementClients {
  std::shared_ptr<RefinementClient> describer;
  std::shared_ptr<RefinementClient> verifier;
  std::shared_ptr<RefinementClient> synthesizer;

  bool empty() const { return !describer && !verifier && !synthesizer; }
};

// POST {role, prompt, context} -> {text}, bearer token in Authorization.
struct HttpClientConfig {
  std::string endpoint;  // http://host:port/path
  std::string token;
  double timeout_s = 10.0;
};

std::shared_ptr<RefinementClient> make_http_client(const HttpClientConfig& config);

// Builds all three roles against REFINEMENT_ENDPOINT / REFINEMENT_TOKEN.
// Returns empty clients when the endpoint variable is unset.
RefinementClients clients_from_environment();

struct RefinementContext {
  TargetRelation prior;
  std::vector<std::string> seen_along_path;  // detection labels, in order
};

// Caption fusion: a caption that is informative and names both the target
// and its reference object contributes its relation phrase; otherwise the
// prior phrase is kept.
std::string fuse_relation(const std::string& caption, const TargetRelation& prior);

// Parses {"formal": ..., "natural": ..., "casual": ...} with exactly those
// keys, each a non-empty string naming the target. Throws kSchemaInvalid.
CoarseInstructions parse_synthesizer_reply(const std::string& text, const std::string& target_label);

struct RefinementResult {
  InstructionBundle bundle;
  std::vector<std::string> log;  // one line per swallowed failure
};

// Never throws for client faults; the input bundle comes back untouched when
// nothing usable was produced.
RefinementResult refine(const InstructionBundle& bundle, const RefinementContext& context,
                        const RefinementClients& clients);

}  // namespace navbench
