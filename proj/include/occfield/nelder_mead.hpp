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

#ifndef OCCFIELD_NELDER_MEAD_HPP_
#define OCCFIELD_NELDER_MEAD_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace occfield {

struct NelderMeadOptions {
  std::size_t max_evaluations = 500;
  double relative_tolerance = 1e-4;
  double initial_step = 0.25;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;

  struct Eval {
    std::vector<double> x;
    double value = 0.0;
  };
  // One entry per objective evaluation, in evaluation order.
  std::vector<Eval> trace;
};

/// Derivative-free simplex minimization (standard reflection / expansion /
/// contraction / shrink coefficients). Every objective call is counted
/// against max_evaluations and recorded in the trace; on budget exhaustion
/// the best point seen so far is returned. Fully deterministic: ties in the
/// simplex ordering resolve by insertion index.
inline NelderMeadResult nelder_mead_minimize(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::vector<double>& x0, const NelderMeadOptions& options = {}) {
  const std::size_t dim = x0.size();
  if (dim == 0) {
    throw std::invalid_argument("nelder_mead_minimize: empty start point");
  }
  if (options.max_evaluations == 0 || options.relative_tolerance <= 0.0) {
    throw std::invalid_argument("nelder_mead_minimize: invalid options");
  }

  constexpr double alpha = 1.0;  // reflection
  constexpr double gamma = 2.0;  // expansion
  constexpr double rho = 0.5;    // contraction
  constexpr double sigma = 0.5;  // shrink

  NelderMeadResult result;
  std::vector<double> best_x = x0;
  double best_value = std::numeric_limits<double>::infinity();
  bool have_best = false;

  auto evaluate = [&](const std::vector<double>& x) {
    const double value = objective(x);
    ++result.evaluations;
    result.trace.push_back({x, value});
    if (!have_best || value < best_value) {
      best_value = value;
      best_x = x;
      have_best = true;
    }
    return value;
  };
  auto budget_left = [&] { return result.evaluations < options.max_evaluations; };

  struct Vertex {
    std::vector<double> x;
    double value = 0.0;
    std::size_t order = 0;  // insertion index, the deterministic tiebreak
  };
  std::vector<Vertex> simplex;
  simplex.reserve(dim + 1);

  simplex.push_back({x0, evaluate(x0), 0});
  if (!std::isfinite(simplex[0].value)) {
    throw std::runtime_error(
        "nelder_mead_minimize: objective not finite at the start point");
  }
  for (std::size_t i = 0; i < dim && budget_left(); ++i) {
    std::vector<double> x = x0;
    x[i] += options.initial_step;
    simplex.push_back({x, evaluate(x), i + 1});
  }

  auto sort_simplex = [&simplex] {
    std::sort(simplex.begin(), simplex.end(), [](const Vertex& a,
                                                 const Vertex& b) {
      if (a.value != b.value) return a.value < b.value;
      return a.order < b.order;
    });
  };

  auto finish = [&](bool converged) {
    sort_simplex();
    result.converged = converged;
    result.x = best_x;
    result.value = best_value;
    return result;
  };

  if (simplex.size() < dim + 1) return finish(false);

  std::size_t next_order = dim + 1;
  while (true) {
    sort_simplex();
    const double f_best = simplex.front().value;
    const double f_worst = simplex.back().value;
    const double spread = 2.0 * std::abs(f_worst - f_best) /
                          (std::abs(f_worst) + std::abs(f_best) + 1e-12);
    if (spread <= options.relative_tolerance) return finish(true);
    if (!budget_left()) return finish(false);

    // Centroid of all but the worst vertex.
    std::vector<double> centroid(dim, 0.0);
    for (std::size_t v = 0; v < dim; ++v) {
      for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[v].x[k];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    auto blend = [&](double coeff) {
      std::vector<double> x(dim);
      for (std::size_t k = 0; k < dim; ++k) {
        x[k] = centroid[k] + coeff * (simplex.back().x[k] - centroid[k]);
      }
      return x;
    };

    const std::vector<double> reflected = blend(-alpha);
    const double f_reflected = evaluate(reflected);

    if (f_reflected < f_best) {
      if (!budget_left()) {
        simplex.back() = {reflected, f_reflected, next_order++};
        return finish(false);
      }
      const std::vector<double> expanded = blend(-alpha * gamma);
      const double f_expanded = evaluate(expanded);
      simplex.back() = f_expanded < f_reflected
                           ? Vertex{expanded, f_expanded, next_order++}
                           : Vertex{reflected, f_reflected, next_order++};
      continue;
    }
    if (f_reflected < simplex[dim - 1].value) {
      simplex.back() = {reflected, f_reflected, next_order++};
      continue;
    }
    if (!budget_left()) return finish(false);
    const bool outside = f_reflected < f_worst;
    const std::vector<double> contracted = blend(outside ? -rho : rho);
    const double f_contracted = evaluate(contracted);
    if (f_contracted < std::min(f_reflected, f_worst)) {
      simplex.back() = {contracted, f_contracted, next_order++};
      continue;
    }
    // Shrink toward the best vertex.
    for (std::size_t v = 1; v < simplex.size(); ++v) {
      if (!budget_left()) return finish(false);
      for (std::size_t k = 0; k < dim; ++k) {
        simplex[v].x[k] = simplex[0].x[k] +
                          sigma * (simplex[v].x[k] - simplex[0].x[k]);
      }
      simplex[v].value = evaluate(simplex[v].x);
      simplex[v].order = next_order++;
    }
  }
}

}  // namespace occfield

#endif  // OCCFIELD_NELDER_MEAD_HPP_
