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

#include "common/error.hpp"

namespace navbench {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kParseError: return "parse_error";
    case ErrorCode::kInvariantViolation: return "invariant_violation";
    case ErrorCode::kIoError: return "io_error";
    case ErrorCode::kGenerationFailed: return "generation_failed";
    case ErrorCode::kSamplingExhausted: return "sampling_exhausted";
    case ErrorCode::kInvalidEpisode: return "invalid_episode";
    case ErrorCode::kInvalidAction: return "invalid_action";
    case ErrorCode::kUnsupportedAction: return "unsupported_action";
    case ErrorCode::kEpisodeFinished: return "episode_finished";
    case ErrorCode::kUnknownEpisode: return "unknown_episode";
    case ErrorCode::kOracleDisabled: return "oracle_disabled";
    case ErrorCode::kMismatchedEpisode: return "mismatched_episode";
    case ErrorCode::kUnreachable: return "unreachable";
    case ErrorCode::kClientTimeout: return "client_timeout";
    case ErrorCode::kSchemaInvalid: return "schema_invalid";
    case ErrorCode::kInternal: return "internal";
  }
  return "internal";
}

}  // namespace navbench
