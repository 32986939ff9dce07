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

#ifndef OCCFIELD_TRAINING_HPP_
#define OCCFIELD_TRAINING_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "occfield/nelder_mead.hpp"
#include "occfield/pseudo_likelihood.hpp"
#include "occfield/random.hpp"
#include "occfield/types.hpp"

namespace occfield {

enum class Optimizer { kNelderMead };

struct TrainingOptions {
  Optimizer optimizer = Optimizer::kNelderMead;
  std::size_t max_evaluations = 500;
  double relative_tolerance = 1e-4;
  double beam_subsample = 1.0;  // fraction of beams kept, (0, 1]
  std::uint64_t rng_seed = 0;
  double fraction_low = 0.1;   // free pseudo-point placement along the beam
  double fraction_high = 0.9;
  double prior_lambda = 0.0;
  std::size_t threads = 0;

  void validate() const {
    if (max_evaluations == 0 || !(relative_tolerance > 0.0) ||
        !(beam_subsample > 0.0) || beam_subsample > 1.0) {
      throw std::invalid_argument("TrainingOptions: invalid field");
    }
  }
};

struct OptimizeResult {
  Hyperparameters theta;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;

  struct TraceRow {
    Hyperparameters theta;
    double objective = 0.0;
    double best_objective = 0.0;  // non-decreasing down the trace
  };
  std::vector<TraceRow> trace;
};

namespace detail {

inline std::vector<double> theta_to_log(const Hyperparameters& theta) {
  return {std::log(theta.sigma_f), std::log(theta.sigma_h),
          std::log(theta.l_p), std::log(theta.l_f), std::log(theta.l_b)};
}

inline Hyperparameters theta_from_log(const std::vector<double>& x) {
  return {std::exp(x[0]), std::exp(x[1]), std::exp(x[2]), std::exp(x[3]),
          std::exp(x[4])};
}

/// Deterministic subsample of k = round(fraction * n) beams (at least one),
/// original order preserved.
inline std::vector<Measurement> subsample_beams(
    const std::vector<Measurement>& beams, double fraction,
    std::uint64_t seed) {
  if (fraction >= 1.0) return beams;
  const std::size_t n = beams.size();
  const std::size_t k = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n))));
  std::vector<std::size_t> indices(n);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {  // partial Fisher-Yates
    const std::size_t j = i + rng.uniform_index(n - i);
    std::swap(indices[i], indices[j]);
  }
  indices.resize(k);
  std::sort(indices.begin(), indices.end());
  std::vector<Measurement> out;
  out.reserve(k);
  for (const std::size_t i : indices) out.push_back(beams[i]);
  return out;
}

}  // namespace detail

/// Trains the kernel hyperparameters by maximizing the log pseudo-likelihood
/// with a derivative-free simplex over log-parameters (positivity for free,
/// scale-invariant steps). Deterministic given the seed; the returned theta
/// never scores below theta0.
inline OptimizeResult optimize(const std::vector<Measurement>& all_beams,
                               const Hyperparameters& theta0,
                               const TrainingOptions& options = {}) {
  theta0.validate();
  options.validate();
  if (theta0.sigma_f <= 0.0 || theta0.sigma_h <= 0.0) {
    throw std::invalid_argument(
        "optimize: log-space optimization needs strictly positive magnitudes");
  }

  std::vector<Measurement> beams;
  beams.reserve(all_beams.size());
  for (const Measurement& m : all_beams) {
    if (!m.is_max_range) beams.push_back(m);
  }
  if (beams.empty()) {
    throw std::invalid_argument("optimize: no usable beams");
  }
  beams = detail::subsample_beams(beams, options.beam_subsample,
                                  options.rng_seed);
  const PseudoPointSet points = sample_pseudo_points(
      beams, options.rng_seed, options.fraction_low, options.fraction_high);

  auto negative_objective = [&](const std::vector<double>& x) {
    return -pseudo_log_likelihood(beams, detail::theta_from_log(x), points,
                                  options.prior_lambda, options.threads);
  };

  NelderMeadOptions nm;
  nm.max_evaluations = options.max_evaluations;
  nm.relative_tolerance = options.relative_tolerance;
  NelderMeadResult nm_result = nelder_mead_minimize(
      negative_objective, detail::theta_to_log(theta0), nm);

  OptimizeResult result;
  result.theta = detail::theta_from_log(nm_result.x);
  result.evaluations = nm_result.evaluations;
  result.converged = nm_result.converged;
  result.initial_objective = -nm_result.trace.front().value;
  result.final_objective = -nm_result.value;
  double best = -std::numeric_limits<double>::infinity();
  for (const NelderMeadResult::Eval& eval : nm_result.trace) {
    best = std::max(best, -eval.value);
    result.trace.push_back(
        {detail::theta_from_log(eval.x), -eval.value, best});
  }
  return result;
}

}  // namespace occfield

#endif  // OCCFIELD_TRAINING_HPP_
