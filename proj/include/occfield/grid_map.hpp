/*
 * Copyright 2026 The occfield Authors
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

#ifndef OCCFIELD_GRID_MAP_HPP_
#define OCCFIELD_GRID_MAP_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "occfield/field.hpp"
#include "occfield/geometry.hpp"
#include "occfield/kernel.hpp"
#include "occfield/types.hpp"

namespace occfield {

struct GridMapOptions {
  double l_occ = std::log(0.7 / 0.3);
  double l_free = std::log(0.3 / 0.7);
  double clamp = 10.0;
};

/// Classic log-odds occupancy grid with an inverse sensor model: cells
/// traversed by a beam receive l_free, the cell containing the hit receives
/// l_occ, max-range beams mark free space only. Log odds are clamped to
/// +-clamp after each scan, which is also why scan application only commutes
/// exactly below the clamp.
class GridMap {
 public:
  GridMap(Point2 origin, double cell_size, std::size_t width,
          std::size_t height, const GridMapOptions& options = {})
      : origin_(origin),
        cell_size_(cell_size),
        width_(width),
        height_(height),
        options_(options),
        logodds_(width * height, 0.0) {
    if (!is_finite(origin) || !std::isfinite(cell_size) || cell_size <= 0.0) {
      throw std::invalid_argument("GridMap: invalid origin or cell_size");
    }
    if (width == 0 || height == 0) {
      throw std::invalid_argument("GridMap: empty grid");
    }
  }

  Point2 origin() const { return origin_; }
  double cell_size() const { return cell_size_; }
  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  const std::vector<double>& log_odds() const { return logodds_; }

  struct Cell {
    std::int64_t x = 0;
    std::int64_t y = 0;
  };

  Cell cell_of(Point2 p) const {
    return {static_cast<std::int64_t>(std::floor((p.x - origin_.x) / cell_size_)),
            static_cast<std::int64_t>(std::floor((p.y - origin_.y) / cell_size_))};
  }

  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.y >= 0 && c.x < static_cast<std::int64_t>(width_) &&
           c.y < static_cast<std::int64_t>(height_);
  }

  double log_odds_at_cell(Cell c) const {
    return logodds_[static_cast<std::size_t>(c.y) * width_ +
                    static_cast<std::size_t>(c.x)];
  }

  /// Applies one scan. Beams leaving the grid are clipped at the boundary;
  /// hit cells outside the grid simply contribute no occupancy update.
  void update_scan(const Scan& scan) {
    scan.validate();
    touched_.clear();
    for (const Scan::Beam& beam : scan.beams) {
      if (!std::isfinite(beam.range) || beam.range <= kMinBeamRange) continue;
      const Point2 end =
          body_to_map(scan.pose, beam.range * Vec2{std::cos(beam.bearing),
                                                   std::sin(beam.bearing)});
      const Cell hit_cell = cell_of(end);
      const bool has_hit = !beam.is_max_range && in_bounds(hit_cell);
      traverse(scan.pose.position, end, [&](Cell c) {
        if (has_hit && c.x == hit_cell.x && c.y == hit_cell.y) return;
        bump(c, options_.l_free);
      });
      if (has_hit) bump(hit_cell, options_.l_occ);
    }
    for (const std::size_t i : touched_) {
      logodds_[i] = std::clamp(logodds_[i], -options_.clamp, options_.clamp);
    }
  }

  struct Probe {
    double probability = 0.5;
    bool in_bounds = false;
  };

  /// Probability of the cell containing `query`; constant inside each cell.
  /// Out-of-bounds queries report the 0.5 prior with the flag cleared.
  Probe prob_at(Point2 query) const {
    if (!is_finite(query)) {
      throw std::invalid_argument("GridMap: non-finite query");
    }
    const Cell c = cell_of(query);
    if (!in_bounds(c)) return {0.5, false};
    return {lambda_to_prob(0.5 * log_odds_at_cell(c)), true};
  }

  /// Probability raster of the whole grid (row 0 at max-y).
  RasterMap to_raster() const {
    RasterMap raster;
    raster.origin = origin_;
    raster.resolution = cell_size_;
    raster.width = width_;
    raster.height = height_;
    raster.values.resize(width_ * height_);
    for (std::size_t row = 0; row < height_; ++row) {
      for (std::size_t col = 0; col < width_; ++col) {
        const std::size_t y = height_ - 1 - row;
        raster.values[row * width_ + col] =
            lambda_to_prob(0.5 * logodds_[y * width_ + col]);
      }
    }
    return raster;
  }

 private:
  void bump(Cell c, double increment) {
    if (!in_bounds(c)) return;
    const std::size_t i =
        static_cast<std::size_t>(c.y) * width_ + static_cast<std::size_t>(c.x);
    logodds_[i] += increment;
    touched_.push_back(i);
  }

  /// Integer grid walk from `from` to `to` (Amanatides-Woo), visiting every
  /// traversed cell inside the grid once, endpoints included. The segment is
  /// clipped to the grid box first.
  template <typename Visit>
  void traverse(Point2 from, Point2 to, Visit&& visit) const {
    const Vec2 d = to - from;
    const double len = norm(d);
    // Clip [t0, t1] of the parametric segment against the grid box.
    double t0 = 0.0, t1 = 1.0;
    const double min_x = origin_.x, min_y = origin_.y;
    const double max_x = origin_.x + static_cast<double>(width_) * cell_size_;
    const double max_y = origin_.y + static_cast<double>(height_) * cell_size_;
    const double p[2] = {from.x, from.y};
    const double dir[2] = {d.x, d.y};
    const double lo[2] = {min_x, min_y};
    const double hi[2] = {max_x, max_y};
    for (int axis = 0; axis < 2; ++axis) {
      if (std::abs(dir[axis]) < 1e-15) {
        if (p[axis] < lo[axis] || p[axis] > hi[axis]) return;
        continue;
      }
      double ta = (lo[axis] - p[axis]) / dir[axis];
      double tb = (hi[axis] - p[axis]) / dir[axis];
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
      if (t0 > t1) return;
    }
    if (len <= 0.0) {
      const Cell c = cell_of(from);
      if (in_bounds(c)) visit(c);
      return;
    }
    // Nudge the entry point inward so the starting cell is unambiguous when
    // the clip landed exactly on a boundary.
    const double eps = 1e-12 * std::max(1.0, len);
    const Point2 start = from + std::min(t0 + eps / len, t1) * d;
    const Point2 stop = from + std::max(t1 - eps / len, t0) * d;

    Cell c = cell_of(start);
    const Cell endc = cell_of(stop);
    if (!in_bounds(c)) return;

    const std::int64_t step_x = d.x > 0.0 ? 1 : (d.x < 0.0 ? -1 : 0);
    const std::int64_t step_y = d.y > 0.0 ? 1 : (d.y < 0.0 ? -1 : 0);
    double t_max_x, t_delta_x;
    double t_max_y, t_delta_y;
    compute_axis(start.x, d.x, origin_.x, c.x, step_x, t_max_x, t_delta_x);
    compute_axis(start.y, d.y, origin_.y, c.y, step_y, t_max_y, t_delta_y);

    // Hard bound on iterations in case of numeric corner cases.
    const std::size_t max_steps = 2 * (width_ + height_) + 4;
    for (std::size_t steps = 0; steps < max_steps; ++steps) {
      visit(c);
      if (c.x == endc.x && c.y == endc.y) return;
      if (t_max_x < t_max_y) {
        c.x += step_x;
        t_max_x += t_delta_x;
      } else {
        c.y += step_y;
        t_max_y += t_delta_y;
      }
      if (!in_bounds(c)) return;
    }
  }

  void compute_axis(double start, double dir, double map_origin,
                    std::int64_t cell, std::int64_t step, double& t_max,
                    double& t_delta) const {
    if (step == 0) {
      t_max = std::numeric_limits<double>::infinity();
      t_delta = std::numeric_limits<double>::infinity();
      return;
    }
    const double boundary =
        map_origin +
        (static_cast<double>(cell) + (step > 0 ? 1.0 : 0.0)) * cell_size_;
    t_max = (boundary - start) / dir;
    t_delta = cell_size_ / std::abs(dir);
  }

  Point2 origin_;
  double cell_size_ = 0.0;
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  GridMapOptions options_;
  std::vector<double> logodds_;
  std::vector<std::size_t> touched_;
};

}  // namespace occfield

#endif  // OCCFIELD_GRID_MAP_HPP_
