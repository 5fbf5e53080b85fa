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

#include <algorithm>
#include <cmath>
#include <compare>
#include <numbers>

namespace navbench {

struct WorldPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const WorldPoint&, const WorldPoint&) = default;
};

inline WorldPoint operator+(WorldPoint a, WorldPoint b) { return {a.x + b.x, a.y + b.y}; }
inline WorldPoint operator-(WorldPoint a, WorldPoint b) { return {a.x - b.x, a.y - b.y}; }
inline WorldPoint operator*(double s, WorldPoint a) { return {s * a.x, s * a.y}; }
inline double dot(WorldPoint a, WorldPoint b) { return a.x * b.x + a.y * b.y; }
inline double cross(WorldPoint a, WorldPoint b) { return a.x * b.y - a.y * b.x; }
inline double norm(WorldPoint a) { return std::hypot(a.x, a.y); }
inline double distance(WorldPoint a, WorldPoint b) { return norm(a - b); }
inline bool is_finite(WorldPoint p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Axis-aligned rectangle, closed.
struct Rect {
  WorldPoint min;
  WorldPoint max;

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  double area() const { return width() * height(); }
  WorldPoint center() const { return {0.5 * (min.x + max.x), 0.5 * (min.y + max.y)}; }

  bool contains(WorldPoint p, double tol = 0.0) const {
    return p.x >= min.x - tol && p.x <= max.x + tol && p.y >= min.y - tol &&
           p.y <= max.y + tol;
  }
  bool contains(const Rect& r, double tol = 0.0) const {
    return contains(r.min, tol) && contains(r.max, tol);
  }
  Rect inflated(double d) const { return {{min.x - d, min.y - d}, {max.x + d, max.y + d}}; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

// Overlap with positive area.
inline bool overlaps_strictly(const Rect& a, const Rect& b) {
  return a.min.x < b.max.x && b.min.x < a.max.x && a.min.y < b.max.y && b.min.y < a.max.y;
}

inline WorldPoint closest_point(const Rect& r, WorldPoint p) {
  return {std::clamp(p.x, r.min.x, r.max.x), std::clamp(p.y, r.min.y, r.max.y)};
}

inline double distance(const Rect& r, WorldPoint p) { return distance(closest_point(r, p), p); }

// Distance between two rectangles (0 when they touch or overlap).
inline double distance(const Rect& a, const Rect& b) {
  const double dx = std::max({0.0, a.min.x - b.max.x, b.min.x - a.max.x});
  const double dy = std::max({0.0, a.min.y - b.max.y, b.min.y - a.max.y});
  return std::hypot(dx, dy);
}

// Wraps to [-pi, pi).
inline double normalize_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = std::fmod(a + std::numbers::pi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  r -= std::numbers::pi;
  if (r >= std::numbers::pi) r -= kTwoPi;
  return r;
}

struct Cell {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

}  // namespace navbench
