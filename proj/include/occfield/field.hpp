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

#ifndef OCCFIELD_FIELD_HPP_
#define OCCFIELD_FIELD_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "occfield/geometry.hpp"
#include "occfield/kernel.hpp"
#include "occfield/parallel.hpp"
#include "occfield/types.hpp"

namespace occfield {

/// Probability raster sampled from a field or grid. Row-major with row 0 at
/// max-y (image convention); `origin` is the min-x / min-y corner.
struct RasterMap {
  Point2 origin;
  double resolution = 0.0;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> values;

  double at(std::size_t row, std::size_t col) const {
    return values[row * width + col];
  }

  Point2 cell_center(std::size_t row, std::size_t col) const {
    return {origin.x + (static_cast<double>(col) + 0.5) * resolution,
            origin.y +
                (static_cast<double>(height - 1 - row) + 0.5) * resolution};
  }
};

enum class MaxRangePolicy {
  kDiscard,   // max-range beams contribute nothing
  kFreeOnly,  // virtual hit at max range with the hit magnitude zeroed
};

struct FieldOptions {
  double prior_lambda = 0.0;
  double truncation_factor = 4.0;
  MaxRangePolicy max_range_policy = MaxRangePolicy::kDiscard;
  double index_cell_size = 0.0;  // <= 0: use 2 * truncation_factor * l_p
  std::size_t threads = 0;       // 0: hardware concurrency (queries only)
  KernelConfig kernel;

  void validate() const {
    if (!std::isfinite(prior_lambda)) {
      throw std::invalid_argument("FieldOptions: non-finite prior_lambda");
    }
    if (!std::isfinite(truncation_factor) || truncation_factor < 3.0) {
      throw std::invalid_argument(
          "FieldOptions: truncation_factor must be >= 3");
    }
  }
};

struct AddScanResult {
  std::size_t added = 0;
  std::size_t rejected = 0;
  // Max-range beams dropped under MaxRangePolicy::kDiscard. Not failures.
  std::size_t discarded_max_range = 0;
};

/// Continuous occupancy field over an append-only measurement store.
///
/// Each stored beam contributes an additive lambda statistic through the hit
/// kernel; twice the accumulated value is the occupancy log odds at the
/// query point. Queries sum only beams whose truncated support contains the
/// query (a box around the beam: truncation_factor * l_p sideways,
/// truncation_factor * max(l_f, l_b) past either endpoint), found through a
/// uniform spatial hash of inflated beam bounding boxes. The tail lost to
/// truncation is bounded by (sigma_f + sigma_h) * exp(-truncation_factor^2/2)
/// per excluded beam.
class OccupancyField {
 public:
  /// Beam record as stored and serialized. `bearing` is the body-frame
  /// angle of the beam; keeping the angle (rather than a unit vector) makes
  /// snapshots lossless.
  struct Record {
    Pose2 pose;
    double bearing = 0.0;
    double range = 0.0;
    bool free_space_only = false;
  };

  explicit OccupancyField(const Hyperparameters& theta,
                          const FieldOptions& options = {})
      : theta_(theta), options_(options) {
    theta_.validate();
    options_.validate();
    const double tf = options_.truncation_factor;
    perp_limit_sq_ = (tf * theta_.l_p) * (tf * theta_.l_p);
    axial_margin_ = tf * std::max(theta_.l_f, theta_.l_b);
    cell_size_ = options_.index_cell_size > 0.0
                     ? options_.index_cell_size
                     : 2.0 * tf * theta_.l_p;
    // AABB inflation that covers the support box at any beam orientation:
    // the x (or y) components of the axis/normal pair form a unit vector,
    // so corner displacement per axis is at most hypot of the two margins.
    inflate_margin_ = std::hypot(axial_margin_, tf * theta_.l_p);
  }

  const Hyperparameters& theta() const { return theta_; }
  const FieldOptions& options() const { return options_; }
  const std::vector<Record>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  /// Appends every usable beam of the scan. Beams with degenerate,
  /// non-finite or over-long ranges are rejected and counted rather than
  /// failing the scan; max-range beams follow the configured policy.
  AddScanResult add_scan(const Scan& scan) {
    scan.validate();
    AddScanResult result;
    for (const Scan::Beam& beam : scan.beams) {
      if (beam.is_max_range &&
          options_.max_range_policy == MaxRangePolicy::kDiscard) {
        ++result.discarded_max_range;
        continue;
      }
      if (!std::isfinite(beam.range) || beam.range <= kMinBeamRange ||
          beam.range > scan.max_range * (1.0 + 1e-12)) {
        ++result.rejected;
        continue;
      }
      append_record(
          {scan.pose, beam.bearing, beam.range, beam.is_max_range});
      ++result.added;
    }
    return result;
  }

  /// Appends a single measurement (direction converted to a bearing).
  void add_measurement(const Measurement& m) {
    m.validate();
    if (m.is_max_range &&
        options_.max_range_policy == MaxRangePolicy::kDiscard) {
      return;
    }
    append_record({m.pose, std::atan2(m.direction_body.y, m.direction_body.x),
                   m.range, m.is_max_range});
  }

  /// Appends a previously serialized record without re-deriving anything.
  void add_record(const Record& record) {
    if (!is_finite(record.pose) || !std::isfinite(record.bearing) ||
        !std::isfinite(record.range) || record.range <= kMinBeamRange) {
      throw std::invalid_argument("OccupancyField: invalid record");
    }
    append_record(record);
  }

  /// Accumulated lambda using the spatial index and truncated supports.
  double lambda_at(Point2 query) const {
    check_query(query);
    KahanSum sum;
    const auto it = index_.find(cell_key(cell_of(query)));
    if (it != index_.end()) {
      for (const std::uint32_t id : it->second) {
        const Beam& beam = beams_[id];
        double value;
        if (evaluate_in_support(beam, query, value)) sum.add(value);
      }
    }
    return options_.prior_lambda + sum.value();
  }

  /// Accumulated lambda from the full O(n) sum; the truncation-free
  /// reference for lambda_at.
  double lambda_at_exact(Point2 query) const {
    check_query(query);
    KahanSum sum;
    for (const Beam& beam : beams_) {
      sum.add(detail::beam_lambda(beam.cached, query, theta_,
                                  options_.kernel));
    }
    return options_.prior_lambda + sum.value();
  }

  double prob_at(Point2 query) const { return lambda_to_prob(lambda_at(query)); }

  /// True when `query` falls inside the truncated support of the stored
  /// beam with the given index. Exposed for diagnostics and tests.
  bool in_support(std::size_t beam_index, Point2 query) const {
    return in_support_impl(beams_[beam_index], query);
  }

  /// Samples prob_at at cell centers over `bbox`. Rows may be evaluated in
  /// parallel; every cell is an independent query, so the result does not
  /// depend on the thread count.
  RasterMap query_grid(const BBox& bbox, double resolution) const {
    if (bbox.empty() || !is_finite(bbox.min) || !is_finite(bbox.max)) {
      throw std::invalid_argument("query_grid: degenerate bbox");
    }
    if (!std::isfinite(resolution) || resolution <= 0.0) {
      throw std::invalid_argument("query_grid: resolution must be > 0");
    }
    const double nx = std::ceil((bbox.max.x - bbox.min.x) / resolution - 1e-9);
    const double ny = std::ceil((bbox.max.y - bbox.min.y) / resolution - 1e-9);
    const std::size_t width = static_cast<std::size_t>(std::max(1.0, nx));
    const std::size_t height = static_cast<std::size_t>(std::max(1.0, ny));
    if (width > 0 && height > 1e8 / static_cast<double>(width)) {
      throw std::length_error("query_grid: raster exceeds 1e8 cells");
    }

    RasterMap raster;
    raster.origin = bbox.min;
    raster.resolution = resolution;
    raster.width = width;
    raster.height = height;
    raster.values.assign(width * height, 0.0);
    parallel_for(height, options_.threads, [&](std::size_t r0, std::size_t r1) {
      for (std::size_t row = r0; row < r1; ++row) {
        for (std::size_t col = 0; col < width; ++col) {
          raster.values[row * width + col] =
              prob_at(raster.cell_center(row, col));
        }
      }
    });
    return raster;
  }

 private:
  struct Beam {
    detail::CachedBeam cached;
    // Projection-fraction window of the truncated support.
    double m_lo = 0.0;
    double m_hi = 0.0;
  };

  struct CellCoord {
    std::int32_t x = 0;
    std::int32_t y = 0;
  };

  static std::uint64_t cell_key(CellCoord c) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.x)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.y));
  }

  CellCoord cell_of(Point2 p) const {
    return {static_cast<std::int32_t>(std::floor(p.x / cell_size_)),
            static_cast<std::int32_t>(std::floor(p.y / cell_size_))};
  }

  static void check_query(Point2 query) {
    if (!is_finite(query)) {
      throw std::invalid_argument("OccupancyField: non-finite query");
    }
  }

  void append_record(const Record& record) {
    records_.push_back(record);
    Beam beam;
    beam.cached = detail::cache_beam(
        record.pose,
        {std::cos(record.bearing), std::sin(record.bearing)}, record.range,
        record.free_space_only);
    beam.m_lo = -axial_margin_ / record.range;
    beam.m_hi = 1.0 + axial_margin_ / record.range;
    const std::uint32_t id = static_cast<std::uint32_t>(beams_.size());
    beams_.push_back(beam);

    BBox box = BBox::empty_box();
    box.expand(beam.cached.origin);
    box.expand(beam.cached.origin + beam.cached.hit_vec);
    box.inflate(inflate_margin_);
    const CellCoord lo = cell_of(box.min);
    const CellCoord hi = cell_of(box.max);
    for (std::int32_t cx = lo.x; cx <= hi.x; ++cx) {
      for (std::int32_t cy = lo.y; cy <= hi.y; ++cy) {
        index_[cell_key({cx, cy})].push_back(id);
      }
    }
  }

  bool in_support_impl(const Beam& beam, Point2 query) const {
    const Vec2 rel = query - beam.cached.origin;
    const double m = dot(beam.cached.hit_vec, rel) * beam.cached.inv_hh;
    if (m < beam.m_lo || m > beam.m_hi) return false;
    const Vec2 v2 = rel - m * beam.cached.hit_vec;
    return dot(v2, v2) <= perp_limit_sq_;
  }

  bool evaluate_in_support(const Beam& beam, Point2 query,
                           double& value) const {
    if (!in_support_impl(beam, query)) return false;
    value = detail::beam_lambda(beam.cached, query, theta_, options_.kernel);
    return true;
  }

  Hyperparameters theta_;
  FieldOptions options_;
  double perp_limit_sq_ = 0.0;
  double axial_margin_ = 0.0;
  double inflate_margin_ = 0.0;
  double cell_size_ = 0.0;
  std::vector<Record> records_;
  std::vector<Beam> beams_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> index_;
};

}  // namespace occfield

#endif  // OCCFIELD_FIELD_HPP_
