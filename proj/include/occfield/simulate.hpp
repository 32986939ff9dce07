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

#ifndef OCCFIELD_SIMULATE_HPP_
#define OCCFIELD_SIMULATE_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "occfield/environment.hpp"
#include "occfield/geometry.hpp"
#include "occfield/random.hpp"
#include "occfield/types.hpp"

namespace occfield {

struct ScanConfig {
  std::size_t beam_count = 180;
  double field_of_view = 2.0 * std::numbers::pi;
  double max_range = 3.0;
  double angular_offset = 0.0;  // bearing of the first beam, body frame

  void validate() const {
    if (beam_count < 1) {
      throw std::invalid_argument("ScanConfig: beam_count must be >= 1");
    }
    if (!std::isfinite(max_range) || max_range <= 0.0 ||
        !std::isfinite(field_of_view) || field_of_view <= 0.0 ||
        !std::isfinite(angular_offset)) {
      throw std::invalid_argument("ScanConfig: invalid field");
    }
  }

  /// Angular spacing between consecutive beams. A full-circle sweep places
  /// beams on an open interval (the last beam must not duplicate the
  /// first), an arc spans its field of view endpoint-to-endpoint.
  double bearing_step() const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (beam_count == 1) return 0.0;
    if (std::abs(field_of_view - two_pi) <= 1e-9) {
      return field_of_view / static_cast<double>(beam_count);
    }
    return field_of_view / static_cast<double>(beam_count - 1);
  }

  double bearing(std::size_t beam) const {
    return angular_offset + static_cast<double>(beam) * bearing_step();
  }
};

/// Casts one ray per bearing against the environment. Beams that meet no
/// obstacle within max_range come back flagged max-range with the range
/// clamped to it.
inline Scan simulate_scan(const Environment& env, const Pose2& pose,
                          const ScanConfig& config) {
  config.validate();
  if (!is_finite(pose)) {
    throw std::invalid_argument("simulate_scan: non-finite pose");
  }
  Scan scan;
  scan.pose = pose;
  scan.max_range = config.max_range;
  scan.beams.reserve(config.beam_count);
  for (std::size_t i = 0; i < config.beam_count; ++i) {
    const double bearing = config.bearing(i);
    const Vec2 dir_world =
        rotated({std::cos(bearing), std::sin(bearing)}, pose.heading);
    const auto hit = env.raycast(pose.position, dir_world, config.max_range);
    if (hit.has_value()) {
      scan.beams.push_back({bearing, *hit, false});
    } else {
      scan.beams.push_back({bearing, config.max_range, true});
    }
  }
  return scan;
}

inline std::vector<Scan> simulate_scans(const Environment& env,
                                        const std::vector<Pose2>& trajectory,
                                        const ScanConfig& config) {
  std::vector<Scan> scans;
  scans.reserve(trajectory.size());
  for (const Pose2& pose : trajectory) {
    scans.push_back(simulate_scan(env, pose, config));
  }
  return scans;
}

struct Benchmark {
  Environment env;
  std::vector<Pose2> trajectory;
  ScanConfig scan_config;
};

/// Multi-room indoor benchmark world: outer walls, two dividing walls with
/// door gaps (occluded regions), several objects including one thinner than
/// a 0.1 m grid cell, and a 24-pose loop trajectory. The seed jitters object
/// placement and poses within margins small enough that every pose stays in
/// free space by construction.
inline Benchmark build_benchmark_env(std::uint64_t seed) {
  Rng rng(seed);
  const double wall = 0.05;  // outer/dividing wall thickness

  auto jitter = [&rng](double amplitude) {
    return rng.uniform(-amplitude, amplitude);
  };

  std::vector<Polygon> obstacles;
  // Outer shell, 8 x 6 m.
  obstacles.push_back(Polygon::rect(0.0, 0.0, 8.0, wall));
  obstacles.push_back(Polygon::rect(0.0, 6.0 - wall, 8.0, 6.0));
  obstacles.push_back(Polygon::rect(0.0, wall, wall, 6.0 - wall));
  obstacles.push_back(Polygon::rect(8.0 - wall, wall, 8.0, 6.0 - wall));

  // Vertical dividing wall with a door gap; the room behind it is occluded
  // from most of the trajectory.
  {
    const double x = 3.0 + jitter(0.1);
    const double door_lo = 1.8 + jitter(0.1);
    const double door_hi = door_lo + 0.8;
    obstacles.push_back(Polygon::rect(x, wall, x + wall, door_lo));
    obstacles.push_back(Polygon::rect(x, door_hi, x + wall, 3.8));
  }
  // Horizontal dividing wall with a door gap.
  {
    const double y = 4.0 + jitter(0.08);
    const double door_lo = 4.8 + jitter(0.1);
    const double door_hi = door_lo + 0.8;
    obstacles.push_back(Polygon::rect(3.0, y, door_lo, y + wall));
    obstacles.push_back(Polygon::rect(door_hi, y, 6.5, y + wall));
  }
  // Free-standing plate thinner than a 0.1 m grid cell.
  {
    const double x = 5.5 + jitter(0.1);
    const double y = 1.0 + jitter(0.1);
    obstacles.push_back(Polygon::rect(x, y, x + 0.04, y + 1.0));
  }
  // Pillars and boxes of assorted sizes.
  {
    const double x = 1.4 + jitter(0.1);
    const double y = 4.4 + jitter(0.1);
    obstacles.push_back(Polygon::rect(x, y, x + 0.2, y + 0.2));
  }
  {
    const double x = 6.4 + jitter(0.1);
    const double y = 1.1 + jitter(0.1);
    obstacles.push_back(Polygon::rect(x, y, x + 0.25, y + 0.25));
  }
  {
    const double x = 1.1 + jitter(0.08);
    const double y = 1.4 + jitter(0.08);
    obstacles.push_back(Polygon::rect(x, y, x + 0.4, y + 0.3));
  }
  {
    // Small post, also below grid-cell size.
    const double x = 6.2 + jitter(0.08);
    const double y = 4.7 + jitter(0.08);
    obstacles.push_back(Polygon::rect(x, y, x + 0.08, y + 0.08));
  }

  Benchmark out;
  out.env = Environment(std::move(obstacles));
  out.scan_config = ScanConfig{180, 2.0 * std::numbers::pi, 3.0, 0.0};

  // Loop through all three rooms. Base waypoints keep >= 0.45 m clearance
  // from every obstacle above, so a +-0.1 m jitter cannot leave free space.
  const Point2 base[] = {
      {0.8, 0.8}, {1.9, 0.7}, {2.6, 1.3}, {2.4, 2.2}, {1.6, 2.6}, {0.8, 3.2},
      {0.9, 4.4}, {1.4, 5.3}, {2.4, 5.4}, {3.4, 5.3}, {4.4, 5.2}, {5.3, 5.3},
      {6.3, 5.4}, {7.2, 5.0}, {7.3, 4.0}, {6.9, 3.1}, {6.0, 2.9}, {5.0, 3.0},
      {4.1, 2.9}, {3.9, 2.0}, {4.2, 1.0}, {5.1, 0.7}, {6.0, 0.6}, {7.2, 0.8}};
  for (const Point2& p : base) {
    Pose2 pose;
    pose.position = {p.x + jitter(0.1), p.y + jitter(0.1)};
    pose.heading = normalize_angle(rng.uniform(-std::numbers::pi,
                                               std::numbers::pi));
    out.trajectory.push_back(pose);
  }
  return out;
}

}  // namespace occfield

#endif  // OCCFIELD_SIMULATE_HPP_
