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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/json_util.hpp"
#include "geometry/planner.hpp"
#include "sim/pose.hpp"

namespace navbench {

enum class TaskType { kFine, kCoarse, kVisualRef, kLongHorizon, kDialogue };

inline constexpr TaskType kAllTaskTypes[] = {TaskType::kFine, TaskType::kCoarse, TaskType::kVisualRef,
                                             TaskType::kLongHorizon, TaskType::kDialogue};

std::string_view task_type_name(TaskType t);
std::optional<TaskType> parse_task_type(std::string_view name);

struct CoarseInstructions {
  std::string formal;
  std::string natural;
  std::string casual;

  friend bool operator==(const CoarseInstructions&, const CoarseInstructions&) = default;
};

struct VisibleObject {
  std::string label;
  double bearing = 0.0;
  double range = 0.0;

  friend bool operator==(const VisibleObject&, const VisibleObject&) = default;
};

// Semantic stand-in for the goal-location reference image.
struct GoalSnapshot {
  Pose captured_at;
  std::vector<VisibleObject> visible;

  friend bool operator==(const GoalSnapshot&, const GoalSnapshot&) = default;
};

struct InstructionBundle {
  std::optional<std::string> fine;
  std::optional<CoarseInstructions> coarse;
  std::optional<GoalSnapshot> goal_snapshot;
  std::optional<std::vector<std::string>> sub_instructions;
  bool oracle_enabled = false;

  friend bool operator==(const InstructionBundle&, const InstructionBundle&) = default;
};

// Throws kInvariantViolation unless exactly the fields required by `type` are set.
void validate_bundle(TaskType type, const InstructionBundle& bundle);

struct Goal {
  WorldPoint point;
  std::optional<std::string> target_object_id;

  friend bool operator==(const Goal&, const Goal&) = default;
};

inline constexpr double kDefaultSuccessThreshold = 3.0;

struct Episode {
  std::string episode_id;
  std::string scene_id;
  TaskType task_type = TaskType::kFine;
  InstructionBundle instructions;
  Pose start;
  std::vector<Goal> goals;
  PlannedPath reference_path;
  double success_thresh = kDefaultSuccessThreshold;

  const Goal& final_goal() const { return goals.back(); }
};

bool operator==(const PlannedPath& a, const PlannedPath& b);
bool operator==(const Episode& a, const Episode& b);

Json episode_to_json(const Episode& e);
Episode episode_from_json(const JsonReader& j);

Json pose_to_json(const Pose& p);
Pose pose_from_json(const JsonReader& j);
Json bundle_to_json(const InstructionBundle& b);
InstructionBundle bundle_from_json(const JsonReader& j);

std::string episodes_to_jsonl(const std::vector<Episode>& episodes);
std::vector<Episode> episodes_from_jsonl(const std::string& text, const std::string& source);

}  // namespace navbench
