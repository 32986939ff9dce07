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

#ifndef OCCFIELD_TYPES_HPP_
#define OCCFIELD_TYPES_HPP_

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "occfield/geometry.hpp"

namespace occfield {

// Beams shorter than this are rejected outright: the projection fraction
// along such a beam is numerically undefined.
inline constexpr double kMinBeamRange = 1e-9;

/// Kernel hyperparameters: two magnitudes and three length scales.
///   sigma_f  free-space magnitude (depth of the negative trough)
///   sigma_h  hit magnitude (height of the bump at the beam endpoint)
///   l_p      perpendicular decay length, meters
///   l_f      along-beam decay length in front of the hit, meters
///   l_b      decay length behind the hit, meters
/// Defaults are the reference fixture used throughout the tests; they are a
/// starting point for training, not trained values.
struct Hyperparameters {
  double sigma_f = 1.0;
  double sigma_h = 1.0;
  double l_p = 0.1;
  double l_f = 0.15;
  double l_b = 0.05;

  /// Throws std::invalid_argument unless magnitudes are finite and
  /// non-negative and length scales are finite and strictly positive.
  void validate() const {
    const bool magnitudes_ok = std::isfinite(sigma_f) && sigma_f >= 0.0 &&
                               std::isfinite(sigma_h) && sigma_h >= 0.0;
    const bool lengths_ok = std::isfinite(l_p) && l_p > 0.0 &&
                            std::isfinite(l_f) && l_f > 0.0 &&
                            std::isfinite(l_b) && l_b > 0.0;
    if (!magnitudes_ok || !lengths_ok) {
      throw std::invalid_argument(
          "Hyperparameters: magnitudes must be finite and >= 0, length scales "
          "finite and > 0");
    }
  }

  /// Non-fatal diagnostics. The behind-hit decay is expected to be faster
  /// than the in-front decay; l_b > l_f smears occupancy past surfaces.
  std::vector<std::string> warnings() const {
    std::vector<std::string> out;
    if (l_b > l_f) {
      out.push_back("l_b > l_f: evidence decays slower behind hits than in "
                    "front of them");
    }
    return out;
  }
};

/// One lidar beam: where the sensor was, which way the beam went (unit
/// vector in the body frame), and how far it travelled.
struct Measurement {
  Pose2 pose;
  Vec2 direction_body{1.0, 0.0};
  double range = 0.0;
  bool is_max_range = false;

  /// Throws std::invalid_argument on non-finite fields, a non-unit
  /// direction, or a degenerate range.
  void validate() const {
    if (!is_finite(pose) || !is_finite(direction_body) ||
        !std::isfinite(range)) {
      throw std::invalid_argument("Measurement: non-finite field");
    }
    if (std::abs(norm(direction_body) - 1.0) > 1e-9) {
      throw std::invalid_argument("Measurement: direction_body must be a unit "
                                  "vector");
    }
    if (range <= kMinBeamRange) {
      throw std::invalid_argument("Measurement: degenerate range");
    }
  }

  /// Beam termination point in the map frame.
  Point2 hit_point() const {
    return body_to_map(pose, range * direction_body);
  }
};

/// A full revolution or arc of beams taken from a single pose. Bearings are
/// body-frame angles and must be strictly increasing; ranges must not exceed
/// max_range.
struct Scan {
  struct Beam {
    double bearing = 0.0;
    double range = 0.0;
    bool is_max_range = false;
  };

  Pose2 pose;
  std::vector<Beam> beams;
  double max_range = 0.0;

  /// Validates the scan-level structure (per-beam numeric problems are the
  /// caller's concern and typically get reported as rejection counts).
  void validate() const {
    if (!is_finite(pose) || !std::isfinite(max_range) || max_range <= 0.0) {
      throw std::invalid_argument("Scan: invalid pose or max_range");
    }
    for (std::size_t i = 0; i < beams.size(); ++i) {
      if (!std::isfinite(beams[i].bearing)) {
        throw std::invalid_argument("Scan: non-finite bearing");
      }
      if (i > 0 && beams[i].bearing <= beams[i - 1].bearing) {
        throw std::invalid_argument("Scan: bearings must be strictly "
                                    "increasing");
      }
    }
  }
};

/// Converts one scan beam to a standalone measurement.
inline Measurement measurement_from_beam(const Pose2& pose,
                                         const Scan::Beam& beam) {
  return Measurement{pose,
                     {std::cos(beam.bearing), std::sin(beam.bearing)},
                     beam.range,
                     beam.is_max_range};
}

/// Flattens scans into a measurement list. Max-range beams are skipped
/// unless requested; beams with degenerate or non-finite ranges are skipped
/// always.
inline std::vector<Measurement> beams_from_scans(
    const std::vector<Scan>& scans, bool include_max_range = false) {
  std::vector<Measurement> out;
  for (const Scan& scan : scans) {
    for (const Scan::Beam& beam : scan.beams) {
      if (beam.is_max_range && !include_max_range) continue;
      if (!std::isfinite(beam.range) || beam.range <= kMinBeamRange) continue;
      out.push_back(measurement_from_beam(scan.pose, beam));
    }
  }
  return out;
}

}  // namespace occfield

#endif  // OCCFIELD_TYPES_HPP_
