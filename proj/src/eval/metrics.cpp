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

#include "eval/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"

namespace navbench {

double dtw(std::span<const WorldPoint> p, std::span<const WorldPoint> r) {
  if (p.empty() || r.empty()) throw Error(ErrorCode::kInvalidArgument, "dtw needs non-empty sequences");
  const std::size_t m = r.size();
  std::vector<double> prev(m), cur(m);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double c = distance(p[i], r[j]);
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else if (i == 0) {
        best = cur[j - 1];
      } else if (j == 0) {
        best = prev[j];
      } else {
        best = std::min({prev[j], cur[j - 1], prev[j - 1]});
      }
      cur[j] = c + best;
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

double ndtw(std::span<const WorldPoint> p, std::span<const WorldPoint> r, double success_thresh) {
  if (!(success_thresh > 0.0)) throw Error(ErrorCode::kInvalidArgument, "ndtw needs success_thresh > 0");
  return std::exp(-dtw(p, r) / (static_cast<double>(r.size()) * success_thresh));
}

std::vector<WorldPoint> downsample(std::span<const WorldPoint> points, double spacing) {
  std::vector<WorldPoint> out;
  if (points.empty()) return out;
  out.push_back(points.front());
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (distance(points[i], out.back()) >= spacing) out.push_back(points[i]);
  }
  const WorldPoint last = points.back();
  if (distance(out.back(), last) > 0.0) {
    if (out.size() > 1 && distance(out.back(), last) < spacing &&
        distance(out[out.size() - 2], last) >= spacing) {
      out.back() = last;
    } else {
      out.push_back(last);
    }
  }
  return out;
}

double spl(bool success, double reference_length, double path_length) {
  if (!success) return 0.0;
  const double denom = std::max(path_length, reference_length);
  return denom > 0.0 ? reference_length / denom : 1.0;
}

}  // namespace navbench
