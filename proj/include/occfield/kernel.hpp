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

#ifndef OCCFIELD_KERNEL_HPP_
#define OCCFIELD_KERNEL_HPP_

#include <cmath>
#include <stdexcept>

#include "occfield/geometry.hpp"
#include "occfield/types.hpp"

namespace occfield {

struct KernelConfig {
  // Restores the literal positive sign of the behind-the-sensor branch for
  // reproduction studies. The default (false) keeps that branch negative so
  // it meets the mid branch continuously at M = 0 and never reports
  // occupancy behind the sensor.
  bool verbatim_m_negative_sign = false;
};

namespace detail {

/// A beam reduced to map-frame quantities reused across many kernel
/// evaluations: sensor origin, hit vector h (origin -> termination point)
/// and the precomputed 1/(h.h).
struct CachedBeam {
  Vec2 origin;
  Vec2 hit_vec;
  double inv_hh = 0.0;
  bool free_space_only = false;  // evaluate with the hit magnitude zeroed
};

inline CachedBeam cache_beam(const Pose2& pose, Vec2 direction_body,
                             double range, bool free_space_only = false) {
  const Vec2 h = rotated(range * direction_body, pose.heading);
  return {pose.position, h, 1.0 / dot(h, h), free_space_only};
}

/// Single-beam lambda contribution at `query`.
///
/// The beam is split by the projection fraction M of the query onto the
/// hit vector: a trough of free-space evidence along the beam (0 <= M < 1)
/// that turns into an occupancy bump near the termination point, a bump
/// decaying quickly past the termination point (M >= 1), and pure
/// free-space decay behind the sensor (M < 0). Every branch is attenuated
/// by the perpendicular distance to the beam axis.
inline double beam_lambda(const CachedBeam& beam, Point2 query,
                          const Hyperparameters& theta,
                          const KernelConfig& config = {}) {
  const Vec2 rel = query - beam.origin;
  const double m = dot(beam.hit_vec, rel) * beam.inv_hh;
  const Vec2 v1 = m * beam.hit_vec;
  const Vec2 v2 = rel - v1;
  const double sigma_h = beam.free_space_only ? 0.0 : theta.sigma_h;

  double k;
  if (m >= 0.0 && m < 1.0) {
    const Vec2 v3 = beam.hit_vec - v1;
    k = (sigma_h + theta.sigma_f) *
            std::exp(-0.5 * dot(v3, v3) / (theta.l_f * theta.l_f)) -
        theta.sigma_f;
  } else if (m >= 1.0) {
    const Vec2 v3 = beam.hit_vec - v1;
    k = sigma_h * std::exp(-0.5 * dot(v3, v3) / (theta.l_b * theta.l_b));
  } else {
    const double sign = config.verbatim_m_negative_sign ? 1.0 : -1.0;
    k = sign * theta.sigma_f *
        std::exp(-0.5 * dot(v1, v1) / (theta.l_f * theta.l_f));
  }
  return k * std::exp(-0.5 * dot(v2, v2) / (theta.l_p * theta.l_p));
}

}  // namespace detail

/// Evaluates the hit-likelihood kernel of one measurement at a query point.
/// Returns a value in [-sigma_f, sigma_h].
///
/// Max-range beams carry no termination point and are rejected here; how
/// (and whether) they contribute is an OccupancyField policy.
inline double hit_lambda(const Measurement& m, Point2 query,
                         const Hyperparameters& theta,
                         const KernelConfig& config = {}) {
  m.validate();
  theta.validate();
  if (m.is_max_range) {
    throw std::invalid_argument("hit_lambda: max-range beam has no hit");
  }
  if (!is_finite(query)) {
    throw std::invalid_argument("hit_lambda: non-finite query");
  }
  return detail::beam_lambda(
      detail::cache_beam(m.pose, m.direction_body, m.range), query, theta,
      config);
}

/// Occupancy probability from an accumulated lambda: the log odds of
/// occupancy are twice the accumulated statistic, so
/// p = 1 / (1 + exp(-2 lambda)).
///
/// Strictly increasing with lambda_to_prob(0) == 0.5 exactly. The result is
/// inside (0, 1) mathematically; in double precision it saturates to exactly
/// 1.0 (respectively 0.0) once |lambda| exceeds roughly 19.
inline double lambda_to_prob(double lambda) {
  if (!std::isfinite(lambda)) {
    throw std::invalid_argument("lambda_to_prob: non-finite lambda");
  }
  const double z = 2.0 * lambda;
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// Applies a rigid transform (rotation about the map origin, then
/// translation) to the measurement pose. Body-frame direction, range and
/// flags are unchanged.
inline Measurement transform_measurement(const Measurement& m,
                                         Vec2 translation, double rotation) {
  m.validate();
  if (!is_finite(translation) || !std::isfinite(rotation)) {
    throw std::invalid_argument("transform_measurement: non-finite transform");
  }
  Measurement out = m;
  out.pose = transformed(m.pose, translation, rotation);
  return out;
}

}  // namespace occfield

#endif  // OCCFIELD_KERNEL_HPP_
