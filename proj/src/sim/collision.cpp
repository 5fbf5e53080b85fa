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

#include "sim/collision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace navbench {
namespace {

constexpr int kBisectionSteps = 60;

template <typename Fn>
void for_cells_in(const OccupancyGrid& grid, const Rect& box, Fn&& fn) {
  const Cell lo = grid.locate(box.min);
  const Cell hi = grid.locate(box.max);
  for (int r = lo.row; r <= hi.row; ++r) {
    for (int c = lo.col; c <= hi.col; ++c) fn(Cell{r, c});
  }
}

std::optional<WorldPoint> nearest_contact(const OccupancyGrid& grid, WorldPoint center, double radius) {
  std::optional<WorldPoint> best;
  double best_d = std::numeric_limits<double>::infinity();
  const Rect box{{center.x - radius, center.y - radius}, {center.x + radius, center.y + radius}};
  for_cells_in(grid, box, [&](Cell c) {
    if (!grid.occupied(c)) return;
    const WorldPoint q = closest_point(grid.cell_rect(c), center);
    const double d = distance(q, center);
    if (d < best_d) {
      best_d = d;
      best = q;
    }
  });
  return best;
}

// Largest fraction s in [0, 1] such that from + s * d stays overlap-free,
// given that from itself is free.
double free_fraction(const OccupancyGrid& grid, WorldPoint from, WorldPoint d, double radius) {
  if (!disc_overlaps(grid, from + d, radius)) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < kBisectionSteps; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (disc_overlaps(grid, from + mid * d, radius)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo;
}

double segment_point_distance(WorldPoint a, WorldPoint b, WorldPoint p) {
  const WorldPoint ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 <= 0.0) return distance(a, p);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(a + t * ab, p);
}

bool segments_intersect(WorldPoint p1, WorldPoint p2, WorldPoint q1, WorldPoint q2) {
  auto orient = [](WorldPoint a, WorldPoint b, WorldPoint c) { return cross(b - a, c - a); };
  const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

double segment_rect_distance(WorldPoint a, WorldPoint b, const Rect& r) {
  if (r.contains(a) || r.contains(b)) return 0.0;
  const WorldPoint corners[4] = {r.min, {r.max.x, r.min.y}, r.max, {r.min.x, r.max.y}};
  double best = std::min(distance(r, a), distance(r, b));
  for (int i = 0; i < 4; ++i) {
    const WorldPoint c0 = corners[i], c1 = corners[(i + 1) % 4];
    if (segments_intersect(a, b, c0, c1)) return 0.0;
    best = std::min(best, segment_point_distance(a, b, c0));
  }
  return best;
}

}  // namespace

bool disc_overlaps(const OccupancyGrid& grid, WorldPoint center, double radius) {
  bool hit = false;
  const Rect box{{center.x - radius, center.y - radius}, {center.x + radius, center.y + radius}};
  const Cell lo = grid.locate(box.min);
  const Cell hi = grid.locate(box.max);
  for (int r = lo.row; r <= hi.row && !hit; ++r) {
    for (int c = lo.col; c <= hi.col; ++c) {
      if (grid.occupied({r, c}) && distance(grid.cell_rect({r, c}), center) < radius - kContactTolerance) {
        hit = true;
        break;
      }
    }
  }
  return hit;
}

double rect_clearance(const OccupancyGrid& grid, WorldPoint p, double search_radius) {
  double best = search_radius;
  const Rect box{{p.x - search_radius, p.y - search_radius}, {p.x + search_radius, p.y + search_radius}};
  for_cells_in(grid, box, [&](Cell c) {
    if (grid.occupied(c)) best = std::min(best, distance(grid.cell_rect(c), p));
  });
  return best;
}

double segment_clearance(const OccupancyGrid& grid, WorldPoint a, WorldPoint b, double cap) {
  double best = cap;
  const Rect box{{std::min(a.x, b.x) - cap, std::min(a.y, b.y) - cap},
                 {std::max(a.x, b.x) + cap, std::max(a.y, b.y) + cap}};
  for_cells_in(grid, box, [&](Cell c) {
    if (best <= 0.0 || !grid.occupied(c)) return;
    const Rect cell = grid.cell_rect(c);
    // Cheap reject before the exact segment test.
    if (segment_point_distance(a, b, cell.center()) - grid.resolution() > best) return;
    best = std::min(best, segment_rect_distance(a, b, cell));
  });
  return best;
}

MoveResult resolve_move(const OccupancyGrid& grid, WorldPoint from, WorldPoint displacement, double radius,
                        bool allow_sliding) {
  const double commanded = norm(displacement);
  if (commanded <= 0.0) return {from, 0.0, std::nullopt};
  if (!disc_overlaps(grid, from + displacement, radius)) return {from + displacement, 0.0, std::nullopt};

  const double s = free_fraction(grid, from, displacement, radius);
  WorldPoint pos = from + s * displacement;
  double achieved = s * commanded;
  const double probe = std::min(1.0, s + 1e-6);
  std::optional<WorldPoint> contact = nearest_contact(grid, from + probe * displacement, radius);

  if (allow_sliding && contact) {
    WorldPoint n = pos - *contact;
    const double nn = norm(n);
    n = nn > 0.0 ? (1.0 / nn) * n : (-1.0 / commanded) * displacement;
    const WorldPoint rest = (1.0 - s) * displacement;
    const double into = dot(rest, n);
    if (into < 0.0) {
      const WorldPoint tangent = rest - into * n;
      if (norm(tangent) > 1e-12) {
        const double st = free_fraction(grid, pos, tangent, radius);
        pos = pos + st * tangent;
        achieved += st * norm(tangent);
      }
    }
  }
  return {pos, std::max(0.0, commanded - achieved), contact};
}

}  // namespace navbench
