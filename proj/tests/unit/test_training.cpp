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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "occfield/field.hpp"
#include "occfield/nelder_mead.hpp"
#include "occfield/pseudo_likelihood.hpp"
#include "occfield/random.hpp"
#include "occfield/training.hpp"

namespace occfield {
namespace {

Measurement beam_at(Pose2 pose, double bearing, double range) {
  return measurement_from_beam(pose, {bearing, range, false});
}

std::vector<Measurement> random_beams(Rng& rng, std::size_t count,
                                      double extent = 3.0) {
  std::vector<Measurement> beams;
  for (std::size_t i = 0; i < count; ++i) {
    beams.push_back(beam_at({{rng.uniform(0.0, extent),
                              rng.uniform(0.0, extent)},
                             rng.uniform(-std::numbers::pi, std::numbers::pi)},
                            rng.uniform(-0.5, 0.5), rng.uniform(0.3, 2.5)));
  }
  return beams;
}

TEST_CASE("sample_pseudo_points") {
  SECTION("degenerate fraction interval pins the free point to midbeam") {
    const std::vector<Measurement> beams = {
        beam_at({{0.0, 0.0}, 0.0}, 0.0, 2.0)};
    const PseudoPointSet set = sample_pseudo_points(beams, 1, 0.5, 0.5);
    REQUIRE(set.pairs.size() == 1);
    CHECK_THAT(set.pairs[0].free_point.x,
               Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(set.pairs[0].free_point.y,
               Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(set.pairs[0].endpoint.x,
               Catch::Matchers::WithinAbs(2.0, 1e-12));
  }

  SECTION("same seed regenerates the identical point set") {
    Rng rng(4);
    const std::vector<Measurement> beams = random_beams(rng, 50);
    const PseudoPointSet a = sample_pseudo_points(beams, 77);
    const PseudoPointSet b = sample_pseudo_points(beams, 77);
    REQUIRE(a.pairs.size() == b.pairs.size());
    for (std::size_t i = 0; i < a.pairs.size(); ++i) {
      CHECK(a.pairs[i].free_point.x == b.pairs[i].free_point.x);
      CHECK(a.pairs[i].free_point.y == b.pairs[i].free_point.y);
    }
    const PseudoPointSet c = sample_pseudo_points(beams, 78);
    bool any_differ = false;
    for (std::size_t i = 0; i < a.pairs.size(); ++i) {
      any_differ = any_differ ||
                   a.pairs[i].free_point.x != c.pairs[i].free_point.x;
    }
    CHECK(any_differ);
  }

  SECTION("180 beams give 180 endpoint/free pairs") {
    Rng rng(5);
    const std::vector<Measurement> beams = random_beams(rng, 180);
    CHECK(sample_pseudo_points(beams, 0).pairs.size() == 180);
  }

  SECTION("fractions stay inside the configured interval") {
    Rng rng(6);
    const std::vector<Measurement> beams = random_beams(rng, 100);
    const PseudoPointSet set = sample_pseudo_points(beams, 9, 0.2, 0.6);
    for (const auto& pair : set.pairs) {
      const Measurement& m = beams[pair.beam_index];
      const double f = norm(pair.free_point - m.pose.position) / m.range;
      CHECK(f >= 0.2 - 1e-12);
      CHECK(f <= 0.6 + 1e-12);
    }
  }

  SECTION("all beams max-range is an error") {
    std::vector<Measurement> beams = {beam_at({{0.0, 0.0}, 0.0}, 0.0, 2.0)};
    beams[0].is_max_range = true;
    CHECK_THROWS_AS(sample_pseudo_points(beams, 0), std::invalid_argument);
  }
}

TEST_CASE("loo_lambda") {
  SECTION("excluding the only beam leaves the prior") {
    const std::vector<Measurement> beams = {
        beam_at({{0.0, 0.0}, 0.0}, 0.0, 1.0)};
    CHECK(loo_lambda(beams, {}, {0.7, 0.1}, 0) == 0.0);
    CHECK(loo_lambda(beams, {}, {0.7, 0.1}, 0, 0.25) == 0.25);
  }

  SECTION("two coincident beams leave one hit_lambda") {
    const Measurement m = beam_at({{0.0, 0.0}, 0.0}, 0.0, 0.8);
    const std::vector<Measurement> beams = {m, m};
    const Point2 q{0.8, 0.0};
    CHECK_THAT(loo_lambda(beams, {}, q, 0),
               Catch::Matchers::WithinAbs(hit_lambda(m, q, {}), 1e-15));
  }

  SECTION("subtraction identity against the exact field sum") {
    Rng rng(31);
    const std::vector<Measurement> beams = random_beams(rng, 3);
    OccupancyField field{Hyperparameters{}};
    for (const Measurement& m : beams) field.add_measurement(m);
    for (int i = 0; i < 100; ++i) {
      const Point2 q{rng.uniform(-1.0, 4.0), rng.uniform(-1.0, 4.0)};
      for (std::size_t excluded = 0; excluded < beams.size(); ++excluded) {
        const double whole = field.lambda_at_exact(q);
        const double rest = loo_lambda(beams, {}, q, excluded);
        const double own = hit_lambda(beams[excluded], q, {});
        REQUIRE_THAT(rest + own, Catch::Matchers::WithinAbs(whole, 1e-12));
      }
    }
  }

  SECTION("bad index is rejected") {
    const std::vector<Measurement> beams = {
        beam_at({{0.0, 0.0}, 0.0}, 0.0, 1.0)};
    CHECK_THROWS_AS(loo_lambda(beams, {}, {0.0, 0.0}, 5),
                    std::invalid_argument);
  }
}

TEST_CASE("pseudo_log_likelihood") {
  SECTION("single beam scores 2 log 0.5") {
    const std::vector<Measurement> beams = {
        beam_at({{0.0, 0.0}, 0.0}, 0.0, 1.0)};
    const PseudoPointSet pts = sample_pseudo_points(beams, 3);
    CHECK_THAT(pseudo_log_likelihood(beams, {}, pts),
               Catch::Matchers::WithinAbs(2.0 * std::log(0.5), 1e-12));
  }

  SECTION("mutual support of coincident beams beats the single beam") {
    const Measurement m = beam_at({{0.0, 0.0}, 0.0}, 0.0, 0.8);
    const std::vector<Measurement> single = {m};
    const std::vector<Measurement> pair = {m, m};
    // Free points kept in the mid-beam trough, away from the endpoint bump.
    const double one = pseudo_log_likelihood(
        single, {}, sample_pseudo_points(single, 3, 0.3, 0.7));
    const double two = pseudo_log_likelihood(
        pair, {}, sample_pseudo_points(pair, 3, 0.3, 0.7));
    CHECK(two / 2.0 > one);
  }

  SECTION("vanishing magnitudes reduce to coin tosses") {
    Rng rng(17);
    const std::vector<Measurement> beams = random_beams(rng, 20);
    Hyperparameters theta;
    theta.sigma_f = 1e-300;
    theta.sigma_h = 1e-300;
    const PseudoPointSet pts = sample_pseudo_points(beams, 1);
    CHECK_THAT(pseudo_log_likelihood(beams, theta, pts),
               Catch::Matchers::WithinAbs(
                   2.0 * static_cast<double>(beams.size()) * std::log(0.5),
                   1e-9));
  }

  SECTION("thread count does not change the objective") {
    Rng rng(23);
    const std::vector<Measurement> beams = random_beams(rng, 60);
    const PseudoPointSet pts = sample_pseudo_points(beams, 2);
    const double serial = pseudo_log_likelihood(beams, {}, pts, 0.0, 1);
    const double parallel = pseudo_log_likelihood(beams, {}, pts, 0.0, 7);
    CHECK(serial == parallel);
  }

  SECTION("central differences agree across step sizes (smoothness)") {
    Rng rng(29);
    const std::vector<Measurement> beams = random_beams(rng, 30);
    const PseudoPointSet pts = sample_pseudo_points(beams, 4);
    auto objective = [&](const std::vector<double>& log_theta) {
      Hyperparameters theta{std::exp(log_theta[0]), std::exp(log_theta[1]),
                            std::exp(log_theta[2]), std::exp(log_theta[3]),
                            std::exp(log_theta[4])};
      return pseudo_log_likelihood(beams, theta, pts);
    };
    const Hyperparameters theta0;
    const std::vector<double> x0 = {
        std::log(theta0.sigma_f), std::log(theta0.sigma_h),
        std::log(theta0.l_p), std::log(theta0.l_f), std::log(theta0.l_b)};
    for (std::size_t k = 0; k < 5; ++k) {
      auto central = [&](double h) {
        std::vector<double> hi = x0, lo = x0;
        hi[k] += h;
        lo[k] -= h;
        return (objective(hi) - objective(lo)) / (2.0 * h);
      };
      const double g1 = central(1e-4);
      const double g2 = central(1e-5);
      const double scale = 0.5 * (std::abs(g1) + std::abs(g2));
      REQUIRE(std::abs(g1 - g2) <= 0.01 * scale + 1e-9);
    }
  }
}

TEST_CASE("nelder-mead minimizer") {
  SECTION("flat objective returns the start point") {
    auto flat = [](const std::vector<double>&) { return 1.0; };
    const NelderMeadResult r = nelder_mead_minimize(flat, {1.0, 2.0});
    CHECK(r.converged);
    CHECK(r.x == std::vector<double>{1.0, 2.0});
    CHECK(r.evaluations == 3);
  }

  SECTION("budget of one evaluation") {
    auto quad = [](const std::vector<double>& x) {
      return x[0] * x[0] + x[1] * x[1];
    };
    NelderMeadOptions opts;
    opts.max_evaluations = 1;
    const NelderMeadResult r = nelder_mead_minimize(quad, {1.0, 1.0}, opts);
    CHECK(r.evaluations == 1);
    CHECK(r.trace.size() == 1);
    CHECK(r.x == std::vector<double>{1.0, 1.0});
  }

  SECTION("converges on a shifted 5-d quadratic") {
    auto quad = [](const std::vector<double>& x) {
      double sum = 1.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - 0.3 * static_cast<double>(i + 1);
        sum += d * d;
      }
      return sum;
    };
    NelderMeadOptions opts;
    opts.max_evaluations = 2000;
    opts.relative_tolerance = 1e-10;
    const NelderMeadResult r =
        nelder_mead_minimize(quad, {0.0, 0.0, 0.0, 0.0, 0.0}, opts);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK_THAT(r.x[i], Catch::Matchers::WithinAbs(
                             0.3 * static_cast<double>(i + 1), 1e-3));
    }
  }
}

TEST_CASE("optimize") {
  Rng rng(41);
  std::vector<Measurement> beams;
  // Two clusters of nearly-parallel beams so the objective has structure.
  for (int i = 0; i < 25; ++i) {
    beams.push_back(beam_at({{0.0, 0.1 * i}, 0.0}, rng.uniform(-0.05, 0.05),
                            1.2 + rng.uniform(-0.02, 0.02)));
    beams.push_back(beam_at({{3.0, 0.1 * i}, std::numbers::pi},
                            rng.uniform(-0.05, 0.05),
                            1.2 + rng.uniform(-0.02, 0.02)));
  }

  TrainingOptions opts;
  opts.max_evaluations = 120;
  opts.rng_seed = 9;
  opts.threads = 2;

  SECTION("objective improves and the trace is monotone in best-so-far") {
    const OptimizeResult result = optimize(beams, {}, opts);
    CHECK(result.final_objective >= result.initial_objective);
    REQUIRE_FALSE(result.trace.empty());
    double best = -1e300;
    for (const auto& row : result.trace) {
      CHECK(row.best_objective >= best - 1e-15);
      best = row.best_objective;
      CHECK(row.best_objective >= row.objective - 1e-15);
    }
    CHECK(result.trace.back().best_objective ==
          Catch::Approx(result.final_objective));
  }

  SECTION("bit-identical under a fixed seed") {
    const OptimizeResult a = optimize(beams, {}, opts);
    const OptimizeResult b = optimize(beams, {}, opts);
    CHECK(a.theta.sigma_f == b.theta.sigma_f);
    CHECK(a.theta.sigma_h == b.theta.sigma_h);
    CHECK(a.theta.l_p == b.theta.l_p);
    CHECK(a.theta.l_f == b.theta.l_f);
    CHECK(a.theta.l_b == b.theta.l_b);
    CHECK(a.final_objective == b.final_objective);
    REQUIRE(a.trace.size() == b.trace.size());
  }

  SECTION("budget of one returns theta0 and a short trace") {
    TrainingOptions one = opts;
    one.max_evaluations = 1;
    const OptimizeResult result = optimize(beams, {}, one);
    CHECK(result.evaluations == 1);
    CHECK(result.trace.size() <= 6);
    // theta0 round-trips through log space, hence the 1-ulp tolerance.
    CHECK_THAT(result.theta.sigma_f,
               Catch::Matchers::WithinRel(Hyperparameters{}.sigma_f, 1e-15));
    CHECK_THAT(result.theta.l_b,
               Catch::Matchers::WithinRel(Hyperparameters{}.l_b, 1e-15));
  }

  SECTION("subsampling keeps determinism and changes the beam set") {
    TrainingOptions sub = opts;
    sub.beam_subsample = 0.3;
    sub.max_evaluations = 40;
    const OptimizeResult a = optimize(beams, {}, sub);
    const OptimizeResult b = optimize(beams, {}, sub);
    CHECK(a.final_objective == b.final_objective);
    const OptimizeResult full = optimize(beams, {}, opts);
    CHECK(a.initial_objective != full.initial_objective);
  }
}

}  // namespace
}  // namespace occfield
