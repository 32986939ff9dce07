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

#ifndef OCCFIELD_ENVIRONMENT_HPP_
#define OCCFIELD_ENVIRONMENT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "occfield/geometry.hpp"

namespace occfield {

// Distance below which a point counts as lying on a polygon edge.
inline constexpr double kBoundaryEpsilon = 1e-12;

/// Simple (non-self-intersecting) polygon, implicitly closed.
struct Polygon {
  std::vector<Point2> vertices;

  void validate() const {
    if (vertices.size() < 3) {
      throw std::invalid_argument("Polygon: need at least 3 vertices");
    }
    for (const Point2& v : vertices) {
      if (!is_finite(v)) {
        throw std::invalid_argument("Polygon: non-finite vertex");
      }
    }
    // Non-adjacent edges must not cross.
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
        if (segments_cross(vertices[i], vertices[(i + 1) % n], vertices[j],
                           vertices[(j + 1) % n])) {
          throw std::invalid_argument("Polygon: self-intersecting");
        }
      }
    }
  }

  BBox bounds() const {
    BBox box = BBox::empty_box();
    for (const Point2& v : vertices) box.expand(v);
    return box;
  }

  static bool segments_cross(Point2 a, Point2 b, Point2 c, Point2 d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > 0.0) != (d2 > 0.0)) && ((d3 > 0.0) != (d4 > 0.0));
  }

  /// Axis-aligned rectangle helper (walls, boxes, plates).
  static Polygon rect(double min_x, double min_y, double max_x, double max_y) {
    return Polygon{{{min_x, min_y}, {max_x, min_y}, {max_x, max_y},
                    {min_x, max_y}}};
  }
};

inline double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Vec2 ab = b - a;
  const double len_sq = dot(ab, ab);
  if (len_sq <= 0.0) return norm(p - a);
  const double t = std::clamp(dot(p - a, ab) / len_sq, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

/// Ground-truth world made of polygonal obstacles.
class Environment {
 public:
  Environment() = default;

  explicit Environment(std::vector<Polygon> obstacles)
      : obstacles_(std::move(obstacles)) {
    for (const Polygon& poly : obstacles_) {
      poly.validate();
      const BBox b = poly.bounds();
      bounds_.expand(b.min);
      bounds_.expand(b.max);
    }
  }

  const std::vector<Polygon>& obstacles() const { return obstacles_; }
  const BBox& bounds() const { return bounds_; }

  /// Boundary-inclusive containment by the even-odd rule.
  bool contains(Point2 p) const {
    for (const Polygon& poly : obstacles_) {
      if (polygon_contains(poly, p)) return true;
    }
    return false;
  }

  /// Strict interior test (boundary excluded); used to validate sensor
  /// poses.
  bool strictly_inside(Point2 p) const {
    for (const Polygon& poly : obstacles_) {
      if (on_boundary(poly, p)) continue;
      if (even_odd(poly, p)) return true;
    }
    return false;
  }

  /// Occupancy label: +1 on or inside any obstacle, -1 in open space.
  int label(Point2 p) const { return contains(p) ? +1 : -1; }

  std::vector<int> label_points(std::span<const Point2> points) const {
    std::vector<int> labels;
    labels.reserve(points.size());
    for (const Point2& p : points) labels.push_back(label(p));
    return labels;
  }

  /// Distance to the nearest obstacle edge hit by the ray, or nullopt when
  /// nothing lies within max_range. Rays grazing a shared vertex resolve to
  /// the single nearest distance.
  std::optional<double> raycast(Point2 origin, Vec2 direction,
                                double max_range) const {
    if (!is_finite(origin) || !is_finite(direction) ||
        !std::isfinite(max_range) || max_range <= 0.0) {
      throw std::invalid_argument("raycast: non-finite input");
    }
    if (std::abs(norm(direction) - 1.0) > 1e-9) {
      throw std::invalid_argument("raycast: direction must be a unit vector");
    }
    if (strictly_inside(origin)) {
      throw std::invalid_argument("raycast: origin inside an obstacle");
    }
    double best = max_range;
    bool hit = false;
    for (const Polygon& poly : obstacles_) {
      const std::size_t n = poly.vertices.size();
      for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = poly.vertices[i];
        const Point2 b = poly.vertices[(i + 1) % n];
        const double t = ray_segment(origin, direction, a, b);
        if (t >= 0.0 && t <= best) {
          best = t;
          hit = true;
        }
      }
    }
    if (!hit) return std::nullopt;
    return best;
  }

 private:
  /// Ray/segment intersection parameter along the ray, or -1.
  static double ray_segment(Point2 origin, Vec2 dir, Point2 a, Point2 b) {
    const Vec2 e = b - a;
    const double denom = cross(dir, e);
    if (std::abs(denom) < 1e-15) return -1.0;  // parallel (or degenerate edge)
    const Vec2 ao = a - origin;
    const double t = cross(ao, e) / denom;
    const double u = cross(ao, dir) / denom;
    if (t < 0.0 || u < 0.0 || u > 1.0) return -1.0;
    return t;
  }

  static bool even_odd(const Polygon& poly, Point2 p) {
    bool inside = false;
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point2 a = poly.vertices[i];
      const Point2 b = poly.vertices[j];
      if ((a.y > p.y) != (b.y > p.y)) {
        const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
        if (p.x < x_cross) inside = !inside;
      }
    }
    return inside;
  }

  static bool on_boundary(const Polygon& poly, Point2 p) {
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (point_segment_distance(p, poly.vertices[i],
                                 poly.vertices[(i + 1) % n]) <=
          kBoundaryEpsilon) {
        return true;
      }
    }
    return false;
  }

  static bool polygon_contains(const Polygon& poly, Point2 p) {
    return on_boundary(poly, p) || even_odd(poly, p);
  }

  std::vector<Polygon> obstacles_;
  BBox bounds_ = BBox::empty_box();
};

}  // namespace occfield

#endif  // OCCFIELD_ENVIRONMENT_HPP_
