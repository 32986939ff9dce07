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
#include <sstream>

#include "occfield/io.hpp"
#include "occfield/simulate.hpp"

namespace occfield {
namespace {

Environment square_room() {
  // 4x4 inner cavity centered on the origin, 0.1 thick walls.
  std::vector<Polygon> walls;
  walls.push_back(Polygon::rect(-2.1, -2.1, 2.1, -2.0));
  walls.push_back(Polygon::rect(-2.1, 2.0, 2.1, 2.1));
  walls.push_back(Polygon::rect(-2.1, -2.0, -2.0, 2.0));
  walls.push_back(Polygon::rect(2.0, -2.0, 2.1, 2.0));
  return Environment(std::move(walls));
}

TEST_CASE("raycast geometry") {
  const Environment room = square_room();

  SECTION("center of a 4x4 room along +x hits at 2.0") {
    const auto hit = room.raycast({0.0, 0.0}, {1.0, 0.0}, 10.0);
    REQUIRE(hit.has_value());
    CHECK_THAT(*hit, Catch::Matchers::WithinAbs(2.0, 1e-12));
  }
  SECTION("nothing within max_range reports MaxRange") {
    CHECK_FALSE(room.raycast({0.0, 0.0}, {1.0, 0.0}, 1.5).has_value());
  }
  SECTION("origin inside an obstacle is rejected") {
    CHECK_THROWS_AS(room.raycast({2.05, 0.0}, {1.0, 0.0}, 5.0),
                    std::invalid_argument);
  }
  SECTION("vertex grazing resolves to a single nearest distance") {
    // Square with a corner at (1, 0): the ray along +x hits the shared
    // vertex of two edges; a brute-force check over both edges gives the
    // same t, and raycast reports exactly that.
    Environment diamond(
        {Polygon{{{1.0, 0.0}, {2.0, -1.0}, {3.0, 0.0}, {2.0, 1.0}}}});
    const auto hit = diamond.raycast({0.0, 0.0}, {1.0, 0.0}, 10.0);
    REQUIRE(hit.has_value());
    CHECK_THAT(*hit, Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
  SECTION("hit points land on an obstacle edge") {
    const Environment env = build_benchmark_env(3).env;
    Rng rng(10);
    for (int i = 0; i < 300; ++i) {
      const Point2 origin{rng.uniform(0.6, 2.4), rng.uniform(0.6, 2.4)};
      if (env.strictly_inside(origin)) continue;
      const double a = rng.uniform(-std::numbers::pi, std::numbers::pi);
      const Vec2 dir{std::cos(a), std::sin(a)};
      const auto hit = env.raycast(origin, dir, 3.0);
      if (!hit.has_value()) continue;
      const Point2 p = origin + *hit * dir;
      double nearest = 1e300;
      for (const Polygon& poly : env.obstacles()) {
        const std::size_t n = poly.vertices.size();
        for (std::size_t e = 0; e < n; ++e) {
          nearest = std::min(nearest,
                             point_segment_distance(p, poly.vertices[e],
                                                    poly.vertices[(e + 1) % n]));
        }
      }
      CHECK(nearest <= 1e-9);
      CHECK(env.label(p) == +1);
    }
  }
}

TEST_CASE("simulate_scan") {
  SECTION("empty environment yields max-range everywhere") {
    const Environment empty;
    const Scan scan = simulate_scan(empty, {{0.0, 0.0}, 0.0},
                                    ScanConfig{180, 2 * std::numbers::pi, 3.0,
                                               0.0});
    REQUIRE(scan.beams.size() == 180);
    for (const auto& beam : scan.beams) {
      CHECK(beam.is_max_range);
      CHECK(beam.range == 3.0);
    }
  }

  SECTION("benchmark configuration: 180 beams, 2 degree spacing, 3 m") {
    const ScanConfig cfg = build_benchmark_env(0).scan_config;
    CHECK(cfg.beam_count == 180);
    CHECK(cfg.max_range == 3.0);
    CHECK_THAT(cfg.bearing_step(),
               Catch::Matchers::WithinAbs(2.0 * std::numbers::pi / 180.0,
                                          1e-15));
  }

  SECTION("square room from the center: ranges in [2, 2 sqrt 2]") {
    const Environment room = square_room();
    const Scan scan = simulate_scan(room, {{0.0, 0.0}, 0.3},
                                    ScanConfig{180, 2 * std::numbers::pi, 10.0,
                                               0.0});
    for (std::size_t i = 0; i < scan.beams.size(); ++i) {
      const auto& beam = scan.beams[i];
      REQUIRE_FALSE(beam.is_max_range);
      CHECK(beam.range >= 2.0 - 1e-12);
      CHECK(beam.range <= 2.0 * std::sqrt(2.0) + 1e-12);
      // Exact per-bearing oracle: distance to the axis-aligned box of
      // half-width 2 along the world direction of this beam.
      const double world = 0.3 + beam.bearing;
      const double c = std::abs(std::cos(world));
      const double s = std::abs(std::sin(world));
      const double expected = std::min(c > 1e-15 ? 2.0 / c : 1e300,
                                       s > 1e-15 ? 2.0 / s : 1e300);
      CHECK_THAT(beam.range, Catch::Matchers::WithinAbs(expected, 1e-9));
    }
  }
}

TEST_CASE("label_points") {
  const Environment env({Polygon::rect(0.0, 0.0, 1.0, 0.05)});
  CHECK(env.label({0.5, 0.025}) == +1);   // inside the wall
  CHECK(env.label({0.5, 0.5}) == -1);     // open space
  CHECK(env.label({0.5, 0.05}) == +1);    // exactly on an edge
  CHECK(env.label({0.0, 0.0}) == +1);     // on a vertex

  const std::vector<Point2> pts = {{0.5, 0.02}, {2.0, 2.0}};
  const std::vector<int> labels = env.label_points(pts);
  REQUIRE(labels.size() == 2);
  CHECK(labels[0] == +1);
  CHECK(labels[1] == -1);
}

TEST_CASE("polygon validation") {
  const Polygon degenerate{{{0.0, 0.0}, {1.0, 0.0}}};
  CHECK_THROWS_AS(degenerate.validate(), std::invalid_argument);
  // Bowtie self-intersection.
  const Polygon bowtie{{{0.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}}};
  CHECK_THROWS_AS(bowtie.validate(), std::invalid_argument);
  CHECK_NOTHROW(Polygon::rect(0, 0, 1, 1).validate());
}

TEST_CASE("benchmark environment") {
  const Benchmark bench = build_benchmark_env(12345);

  SECTION("deterministic bytes for a fixed seed") {
    const Benchmark again = build_benchmark_env(12345);
    std::ostringstream a, b;
    save_environment(bench.env, a);
    save_environment(again.env, b);
    CHECK(a.str() == b.str());
    std::ostringstream ta, tb;
    save_trajectory(bench.trajectory, ta);
    save_trajectory(again.trajectory, tb);
    CHECK(ta.str() == tb.str());

    const Benchmark other = build_benchmark_env(999);
    std::ostringstream c;
    save_environment(other.env, c);
    CHECK(a.str() != c.str());
  }

  SECTION("contains an obstacle thinner than a 0.1 m grid cell") {
    double thinnest = 1e300;
    for (const Polygon& poly : bench.env.obstacles()) {
      const BBox box = poly.bounds();
      thinnest = std::min(thinnest, std::min(box.max.x - box.min.x,
                                             box.max.y - box.min.y));
    }
    CHECK(thinnest < 0.1);
  }

  SECTION("all 24 poses lie in free space") {
    REQUIRE(bench.trajectory.size() == 24);
    for (const Pose2& pose : bench.trajectory) {
      CHECK(bench.env.label(pose.position) == -1);
    }
  }

  SECTION("obstacles stay inside the environment bounds") {
    for (const Polygon& poly : bench.env.obstacles()) {
      for (const Point2& v : poly.vertices) {
        CHECK(bench.env.bounds().contains(v));
      }
    }
  }
}

}  // namespace
}  // namespace occfield
