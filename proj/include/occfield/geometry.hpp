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

#ifndef OCCFIELD_GEOMETRY_HPP_
#define OCCFIELD_GEOMETRY_HPP_

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace occfield {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

using Point2 = Vec2;

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline Vec2 operator*(Vec2 v, double s) { return s * v; }
inline Vec2 operator-(Vec2 v) { return {-v.x, -v.y}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double squared_norm(Vec2 v) { return dot(v, v); }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

inline bool is_finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

/// Rotates `v` counter-clockwise by `angle` radians.
inline Vec2 rotated(Vec2 v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Wraps an angle into (-pi, pi].
inline double normalize_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle + std::numbers::pi, two_pi);
  if (a <= 0.0) a += two_pi;
  return a - std::numbers::pi;
}

/// Sensor pose in the map frame: position of the sensor origin and the
/// heading that maps body-frame directions into the map frame.
struct Pose2 {
  Point2 position;
  double heading = 0.0;  // radians, kept in (-pi, pi]
};

inline bool is_finite(const Pose2& pose) {
  return is_finite(pose.position) && std::isfinite(pose.heading);
}

/// Body frame -> map frame for a point expressed relative to the sensor.
inline Point2 body_to_map(const Pose2& pose, Vec2 body) {
  return pose.position + rotated(body, pose.heading);
}

/// Composes a rigid transform (rotation about the origin, then translation)
/// with a pose.
inline Pose2 transformed(const Pose2& pose, Vec2 translation, double rotation) {
  return {rotated(pose.position, rotation) + translation,
          normalize_angle(pose.heading + rotation)};
}

/// Applies the same rigid transform to a free point.
inline Point2 transformed(Point2 point, Vec2 translation, double rotation) {
  return rotated(point, rotation) + translation;
}

struct BBox {
  Point2 min;
  Point2 max;

  bool empty() const { return min.x > max.x || min.y > max.y; }

  void expand(Point2 p) {
    if (empty()) {
      min = max = p;
      return;
    }
    min.x = std::min(min.x, p.x);
    min.y = std::min(min.y, p.y);
    max.x = std::max(max.x, p.x);
    max.y = std::max(max.y, p.y);
  }

  void inflate(double margin) {
    min.x -= margin;
    min.y -= margin;
    max.x += margin;
    max.y += margin;
  }

  bool contains(Point2 p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }

  static BBox empty_box() {
    return {{1.0, 1.0}, {-1.0, -1.0}};
  }
};

/// Compensated (Kahan) accumulator; keeps long lambda sums insensitive to
/// summation order at the 1e-9 level required of field queries.
class KahanSum {
 public:
  void add(double value) {
    const double y = value - compensation_;
    const double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }

  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace occfield

#endif  // OCCFIELD_GEOMETRY_HPP_
