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

#include <span>
#include <vector>

#include "geometry/types.hpp"

namespace navbench {

inline constexpr double kDtwSpacing = 0.25;

// Dynamic time warping with Euclidean point cost; both ends matched and
// steps restricted to match, insertion and deletion. Inputs must be
// non-empty.
double dtw(std::span<const WorldPoint> p, std::span<const WorldPoint> r);

// exp(-dtw(p, r) / (|r| * success_thresh)).
double ndtw(std::span<const WorldPoint> p, std::span<const WorldPoint> r, double success_thresh);

// Keeps the first point, then every point at least `spacing` from the last
// kept one. The final point is always kept; if it lands closer than
// `spacing` to its predecessor, it replaces that predecessor.
std::vector<WorldPoint> downsample(std::span<const WorldPoint> points, double spacing = kDtwSpacing);

// S * L / max(P, L); 0 when L and P are both 0 and S is 0.
double spl(bool success, double reference_length, double path_length);

}  // namespace navbench
