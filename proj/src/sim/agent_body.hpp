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

#include <numbers>

namespace navbench {

// Cylindrical embodiment shared by planning, rasterization and simulation.
struct AgentBody {
  double radius = 0.30;
  double height = 1.50;
  double max_linear_speed = 1.0;
  double max_angular_speed = std::numbers::pi / 2.0;

  void validate() const;
};

}  // namespace navbench
