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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "geometry/types.hpp"

namespace navbench {

// Metric 2D raster of free/occupied space. Rows run along +y, columns along
// +x, and cell (0, 0) has its lower-left corner at origin(). Every query
// outside the raster reports occupied.
class OccupancyGrid {
 public:
  OccupancyGrid(double resolution, WorldPoint origin, int width, int height);

  double resolution() const { return resolution_; }
  WorldPoint origin() const { return origin_; }
  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t cell_count() const { return cells_.size(); }

  bool in_bounds(Cell c) const {
    return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
  }
  bool occupied(Cell c) const { return !in_bounds(c) || cells_[index(c)] != 0; }
  bool free(Cell c) const { return !occupied(c); }
  void set_occupied(Cell c, bool value = true);

  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.col);
  }
  Cell cell_at(std::size_t index) const {
    return {static_cast<int>(index / static_cast<std::size_t>(width_)),
            static_cast<int>(index % static_cast<std::size_t>(width_))};
  }

  // Cell containing p; may lie outside the raster.
  Cell locate(WorldPoint p) const;
  std::optional<Cell> cell_of(WorldPoint p) const;
  bool occupied_at(WorldPoint p) const { return occupied(locate(p)); }

  WorldPoint cell_center(Cell c) const;
  Rect cell_rect(Cell c) const;
  Rect extent() const;

  std::size_t occupied_count() const;
  const std::vector<std::uint8_t>& cells() const { return cells_; }

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

 private:
  double resolution_;
  WorldPoint origin_;
  int width_;
  int height_;
  std::vector<std::uint8_t> cells_;
};

// Output cell is occupied iff some occupied input cell center lies within
// `radius` of its own center (cell-center metric, so the footprint error is
// bounded by the resolution).
OccupancyGrid dilate(const OccupancyGrid& grid, double radius);

// Free-cell center closest to p; ties broken by (row, col). Requires at least
// one free cell.
WorldPoint nearest_free_point(const OccupancyGrid& grid, WorldPoint p);

}  // namespace navbench
