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

#include "sim/agent_body.hpp"

#include "common/error.hpp"

namespace navbench {

void AgentBody::validate() const {
  if (!(radius > 0.0) || !(height > 0.0) || !(max_linear_speed > 0.0) || !(max_angular_speed > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "agent radius, height and speeds must be > 0");
  }
}

}  // namespace navbench
