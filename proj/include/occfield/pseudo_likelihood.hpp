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

#ifndef OCCFIELD_PSEUDO_LIKELIHOOD_HPP_
#define OCCFIELD_PSEUDO_LIKELIHOOD_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "occfield/geometry.hpp"
#include "occfield/kernel.hpp"
#include "occfield/parallel.hpp"
#include "occfield/random.hpp"
#include "occfield/types.hpp"

namespace occfield {

/// Pseudo measurements derived from a beam set: per non-max-range beam,
/// its endpoint labeled occupied and one point sampled along the beam
/// labeled free. Regeneration with the same seed is bit-identical.
struct PseudoPointSet {
  struct Pair {
    Point2 endpoint;    // target +1
    Point2 free_point;  // target -1
    std::size_t beam_index = 0;
  };

  std::vector<Pair> pairs;
  std::uint64_t rng_seed = 0;
  double fraction_low = 0.1;
  double fraction_high = 0.9;
};

/// Samples the endpoint/free-point pairs. The free point sits at
/// pose + f * (hit - pose) with f drawn uniformly from
/// [fraction_low, fraction_high] per beam.
inline PseudoPointSet sample_pseudo_points(
    const std::vector<Measurement>& beams, std::uint64_t seed,
    double fraction_low = 0.1, double fraction_high = 0.9) {
  if (!(fraction_low > 0.0) || !(fraction_high < 1.0) ||
      fraction_low > fraction_high) {
    throw std::invalid_argument(
        "sample_pseudo_points: fraction range must satisfy 0 < low <= high < 1");
  }
  if (beams.empty()) {
    throw std::invalid_argument("sample_pseudo_points: no beams");
  }
  PseudoPointSet set;
  set.rng_seed = seed;
  set.fraction_low = fraction_low;
  set.fraction_high = fraction_high;
  Rng rng(seed);
  for (std::size_t i = 0; i < beams.size(); ++i) {
    // One uniform draw per beam regardless of use keeps the mapping from
    // beam index to draw stable under max-range interleaving.
    const double f = rng.uniform(fraction_low, fraction_high);
    if (beams[i].is_max_range) continue;
    const Point2 hit = beams[i].hit_point();
    const Point2 origin = beams[i].pose.position;
    set.pairs.push_back({hit, origin + f * (hit - origin), i});
  }
  if (set.pairs.empty()) {
    throw std::invalid_argument(
        "sample_pseudo_points: every beam is max-range");
  }
  return set;
}

namespace detail {

inline std::vector<CachedBeam> cache_beams(
    const std::vector<Measurement>& beams) {
  std::vector<CachedBeam> cached;
  cached.reserve(beams.size());
  for (const Measurement& m : beams) {
    cached.push_back(cache_beam(m.pose, m.direction_body, m.range));
  }
  return cached;
}

/// log(1 / (1 + exp(-z))) without overflow at either tail.
inline double log_logistic(double z) {
  if (z >= 0.0) return -std::log1p(std::exp(-z));
  return z - std::log1p(std::exp(z));
}

inline double loo_lambda_cached(const std::vector<CachedBeam>& cached,
                                const Hyperparameters& theta, Point2 point,
                                std::size_t excluded_beam,
                                double prior_lambda) {
  KahanSum sum;
  for (std::size_t j = 0; j < cached.size(); ++j) {
    if (j == excluded_beam) continue;
    sum.add(beam_lambda(cached[j], point, theta));
  }
  return prior_lambda + sum.value();
}

}  // namespace detail

/// Leave-one-out lambda: the accumulated statistic at `point` with
/// `excluded_beam` removed from the sum (prior included). Always the exact,
/// untruncated sum.
inline double loo_lambda(const std::vector<Measurement>& beams,
                         const Hyperparameters& theta, Point2 point,
                         std::size_t excluded_beam,
                         double prior_lambda = 0.0) {
  if (excluded_beam >= beams.size()) {
    throw std::invalid_argument("loo_lambda: excluded_beam out of range");
  }
  if (!is_finite(point)) {
    throw std::invalid_argument("loo_lambda: non-finite point");
  }
  theta.validate();
  return detail::loo_lambda_cached(detail::cache_beams(beams), theta, point,
                                   excluded_beam, prior_lambda);
}

/// Log pseudo-likelihood of the pseudo measurements under theta: the sum of
/// leave-one-out log probabilities of the endpoint (occupied) and sampled
/// free point of every beam. Terms may be evaluated in parallel; the final
/// reduction order is fixed, so the result is thread-count independent.
inline double pseudo_log_likelihood(const std::vector<Measurement>& beams,
                                    const Hyperparameters& theta,
                                    const PseudoPointSet& points,
                                    double prior_lambda = 0.0,
                                    std::size_t threads = 1) {
  theta.validate();
  const std::vector<detail::CachedBeam> cached = detail::cache_beams(beams);
  const std::size_t n = points.pairs.size();
  std::vector<double> endpoint_terms(n, 0.0);
  std::vector<double> free_terms(n, 0.0);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const PseudoPointSet::Pair& pair = points.pairs[i];
      const double lambda_endpoint = detail::loo_lambda_cached(
          cached, theta, pair.endpoint, pair.beam_index, prior_lambda);
      const double lambda_free = detail::loo_lambda_cached(
          cached, theta, pair.free_point, pair.beam_index, prior_lambda);
      endpoint_terms[i] = detail::log_logistic(2.0 * lambda_endpoint);
      free_terms[i] = detail::log_logistic(-2.0 * lambda_free);
    }
  });
  KahanSum total;
  for (const double t : endpoint_terms) total.add(t);
  for (const double t : free_terms) total.add(t);
  return total.value();
}

}  // namespace occfield

#endif  // OCCFIELD_PSEUDO_LIKELIHOOD_HPP_
