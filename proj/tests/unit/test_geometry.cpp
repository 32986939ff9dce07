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

#include "occfield/geometry.hpp"
#include "occfield/types.hpp"

namespace occfield {
namespace {

TEST_CASE("normalize_angle wraps into (-pi, pi]") {
  CHECK(normalize_angle(0.0) == 0.0);
  CHECK(normalize_angle(std::numbers::pi) == std::numbers::pi);
  CHECK(normalize_angle(-std::numbers::pi) == std::numbers::pi);
  CHECK_THAT(normalize_angle(3.0 * std::numbers::pi),
             Catch::Matchers::WithinAbs(std::numbers::pi, 1e-12));
  CHECK_THAT(normalize_angle(-0.5), Catch::Matchers::WithinAbs(-0.5, 1e-15));
  for (double a = -20.0; a <= 20.0; a += 0.37) {
    const double w = normalize_angle(a);
    CHECK(w > -std::numbers::pi);
    CHECK(w <= std::numbers::pi);
    CHECK_THAT(std::sin(w), Catch::Matchers::WithinAbs(std::sin(a), 1e-9));
    CHECK_THAT(std::cos(w), Catch::Matchers::WithinAbs(std::cos(a), 1e-9));
  }
}

TEST_CASE("body_to_map applies heading then translation") {
  const Pose2 pose{{1.0, 2.0}, std::numbers::pi / 2.0};
  const Point2 p = body_to_map(pose, {1.0, 0.0});
  CHECK_THAT(p.x, Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK_THAT(p.y, Catch::Matchers::WithinAbs(3.0, 1e-12));
}

TEST_CASE("bbox expand and inflate") {
  BBox box = BBox::empty_box();
  CHECK(box.empty());
  box.expand({1.0, 1.0});
  box.expand({-1.0, 2.0});
  CHECK(box.min.x == -1.0);
  CHECK(box.max.y == 2.0);
  box.inflate(0.5);
  CHECK(box.contains({-1.4, 0.6}));
  CHECK_FALSE(box.contains({-1.6, 0.6}));
}

TEST_CASE("measurement validation") {
  Measurement m;
  m.pose = {{0.0, 0.0}, 0.0};
  m.direction_body = {1.0, 0.0};
  m.range = 1.0;
  CHECK_NOTHROW(m.validate());
  m.range = 0.0;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m.range = 1.0;
  m.direction_body = {0.9, 0.0};
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}

TEST_CASE("scan validation requires strictly increasing bearings") {
  Scan scan;
  scan.pose = {{0.0, 0.0}, 0.0};
  scan.max_range = 3.0;
  scan.beams = {{-0.1, 1.0, false}, {0.0, 1.0, false}, {0.1, 1.0, false}};
  CHECK_NOTHROW(scan.validate());
  scan.beams[2].bearing = 0.0;
  CHECK_THROWS_AS(scan.validate(), std::invalid_argument);
}

TEST_CASE("hyperparameter validation and warnings") {
  Hyperparameters theta;
  CHECK_NOTHROW(theta.validate());
  CHECK(theta.warnings().empty());
  theta.l_b = 0.3;  // slower decay behind hits than in front
  CHECK_FALSE(theta.warnings().empty());
  theta.l_p = 0.0;
  CHECK_THROWS_AS(theta.validate(), std::invalid_argument);
  theta = Hyperparameters{};
  theta.sigma_f = -0.1;
  CHECK_THROWS_AS(theta.validate(), std::invalid_argument);
  theta.sigma_f = 0.0;  // magnitudes may reach zero
  CHECK_NOTHROW(theta.validate());
}

}  // namespace
}  // namespace occfield
