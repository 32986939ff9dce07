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

#ifndef OCCFIELD_CARMEN_HPP_
#define OCCFIELD_CARMEN_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "occfield/geometry.hpp"
#include "occfield/types.hpp"

namespace occfield {

class CarmenParseError : public std::runtime_error {
 public:
  CarmenParseError(const std::string& message, std::size_t line_number)
      : std::runtime_error("line " + std::to_string(line_number) + ": " +
                           message),
        line_number_(line_number) {}

  std::size_t line_number() const { return line_number_; }

 private:
  std::size_t line_number_;
};

/// One parsed log line. FLASER records carry the full payload
///   FLASER n r1..rn laser_x laser_y laser_theta robot_x robot_y robot_theta
///          timestamp host logger_ts
/// ODOM records keep the robot pose; anything else is kind Other with only
/// the raw line retained.
struct CarmenRecord {
  enum class Kind { kFlaser, kOdom, kOther };

  Kind kind = Kind::kOther;
  std::size_t reading_count = 0;
  std::vector<double> ranges;
  Pose2 laser_pose;
  Pose2 robot_pose;
  double timestamp = 0.0;
  std::string raw;
};

namespace detail {

inline std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r')) {
      ++i;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
           line[i] != '\r') {
      ++i;
    }
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

inline double parse_real(std::string_view token, std::size_t line_number,
                         const char* what) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw CarmenParseError(std::string("expected a number for ") + what +
                               ", got '" + std::string(token) + "'",
                           line_number);
  }
  return value;
}

/// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  (void)ec;
  return std::string(buffer, ptr);
}

}  // namespace detail

/// Parses one log line. Returns nullopt for blank lines and comments;
/// unknown record kinds come back as Kind::kOther (skipped downstream,
/// never an error). Malformed FLASER payloads throw CarmenParseError.
inline std::optional<CarmenRecord> parse_carmen_line(
    std::string_view line, std::size_t line_number = 0) {
  const std::vector<std::string_view> tokens =
      detail::split_whitespace(line);
  if (tokens.empty() || tokens[0].front() == '#') return std::nullopt;

  CarmenRecord record;
  record.raw = std::string(line);

  if (tokens[0] == "FLASER") {
    record.kind = CarmenRecord::Kind::kFlaser;
    if (tokens.size() < 2) {
      throw CarmenParseError("FLASER without reading count", line_number);
    }
    std::size_t count = 0;
    {
      const auto t = tokens[1];
      const auto [ptr, ec] =
          std::from_chars(t.data(), t.data() + t.size(), count);
      if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw CarmenParseError("bad FLASER reading count '" +
                                   std::string(t) + "'",
                               line_number);
      }
    }
    // FLASER n <n ranges> <6 pose values> <timestamp host logger_ts>
    const std::size_t expected = 2 + count + 6 + 3;
    if (tokens.size() != expected) {
      throw CarmenParseError(
          "FLASER field count mismatch: expected " +
              std::to_string(expected) + " tokens for " +
              std::to_string(count) + " readings, got " +
              std::to_string(tokens.size()),
          line_number);
    }
    record.reading_count = count;
    record.ranges.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      record.ranges.push_back(
          detail::parse_real(tokens[2 + i], line_number, "range"));
    }
    const std::size_t p = 2 + count;
    record.laser_pose.position.x =
        detail::parse_real(tokens[p + 0], line_number, "laser x");
    record.laser_pose.position.y =
        detail::parse_real(tokens[p + 1], line_number, "laser y");
    record.laser_pose.heading =
        detail::parse_real(tokens[p + 2], line_number, "laser theta");
    record.robot_pose.position.x =
        detail::parse_real(tokens[p + 3], line_number, "robot x");
    record.robot_pose.position.y =
        detail::parse_real(tokens[p + 4], line_number, "robot y");
    record.robot_pose.heading =
        detail::parse_real(tokens[p + 5], line_number, "robot theta");
    record.timestamp =
        detail::parse_real(tokens[p + 6], line_number, "timestamp");
    return record;
  }

  if (tokens[0] == "ODOM") {
    record.kind = CarmenRecord::Kind::kOdom;
    // ODOM x y theta tv rv accel timestamp host logger_ts
    if (tokens.size() >= 4) {
      record.robot_pose.position.x =
          detail::parse_real(tokens[1], line_number, "odom x");
      record.robot_pose.position.y =
          detail::parse_real(tokens[2], line_number, "odom y");
      record.robot_pose.heading =
          detail::parse_real(tokens[3], line_number, "odom theta");
    }
    if (tokens.size() >= 8) {
      record.timestamp =
          detail::parse_real(tokens[7], line_number, "timestamp");
    }
    return record;
  }

  record.kind = CarmenRecord::Kind::kOther;
  return record;
}

/// Re-serializes a FLASER record with shortest round-trip number formatting
/// (host and logger timestamp are not retained; placeholders are emitted).
inline std::string serialize_flaser(const CarmenRecord& record) {
  std::string out = "FLASER " + std::to_string(record.reading_count);
  for (const double r : record.ranges) {
    out += ' ';
    out += detail::format_double(r);
  }
  for (const double v :
       {record.laser_pose.position.x, record.laser_pose.position.y,
        record.laser_pose.heading, record.robot_pose.position.x,
        record.robot_pose.position.y, record.robot_pose.heading,
        record.timestamp}) {
    out += ' ';
    out += detail::format_double(v);
  }
  out += " host 0";
  return out;
}

struct LogSensorConfig {
  double field_of_view = std::numbers::pi;  // arc centered on the heading
  double max_range = 10.0;
  // Ranges within this distance of max_range (or beyond) flag as max-range.
  double max_range_slack = 0.01;
  bool use_robot_pose = false;  // default: the laser pose fields
  bool fail_fast = true;        // otherwise count parse errors and continue
};

struct LogStats {
  std::size_t scans = 0;
  std::size_t beams = 0;
  std::size_t max_range_beams = 0;
  std::size_t odom_records = 0;
  std::size_t skipped_records = 0;
  std::size_t robotlaser_records = 0;
  std::size_t parse_errors = 0;
};

/// Streams a CARMEN log, invoking `on_scan(Scan&&)` per FLASER record.
/// Memory use is bounded by the longest single line. Bearings span the
/// configured field of view centered on the sensor heading: the first beam
/// at -fov/2, consecutive beams exactly fov/(n-1) apart.
template <typename OnScan>
LogStats for_each_scan(std::istream& input, const LogSensorConfig& config,
                       OnScan&& on_scan) {
  LogStats stats;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(input, line)) {
    ++line_number;
    std::optional<CarmenRecord> record;
    try {
      record = parse_carmen_line(line, line_number);
    } catch (const CarmenParseError&) {
      if (config.fail_fast) throw;
      ++stats.parse_errors;
      continue;
    }
    if (!record.has_value()) continue;
    switch (record->kind) {
      case CarmenRecord::Kind::kOdom:
        ++stats.odom_records;
        continue;
      case CarmenRecord::Kind::kOther: {
        const std::string_view raw = record->raw;
        if (raw.substr(0, 10) == "ROBOTLASER") {
          ++stats.robotlaser_records;
        } else {
          ++stats.skipped_records;
        }
        continue;
      }
      case CarmenRecord::Kind::kFlaser:
        break;
    }

    const std::size_t n = record->reading_count;
    if (n < 2) {
      const CarmenParseError error("FLASER needs at least 2 readings",
                                   line_number);
      if (config.fail_fast) throw error;
      ++stats.parse_errors;
      continue;
    }
    Scan scan;
    scan.pose = config.use_robot_pose ? record->robot_pose
                                      : record->laser_pose;
    scan.pose.heading = normalize_angle(scan.pose.heading);
    scan.max_range = config.max_range;
    scan.beams.reserve(n);
    const double step =
        config.field_of_view / static_cast<double>(n - 1);
    const double first = -0.5 * config.field_of_view;
    for (std::size_t i = 0; i < n; ++i) {
      Scan::Beam beam;
      beam.bearing = first + static_cast<double>(i) * step;
      const double r = record->ranges[i];
      beam.is_max_range = r >= config.max_range - config.max_range_slack;
      beam.range = std::min(r, config.max_range);
      scan.beams.push_back(beam);
      ++stats.beams;
      if (beam.is_max_range) ++stats.max_range_beams;
    }
    ++stats.scans;
    on_scan(std::move(scan));
  }
  return stats;
}

/// Collects every scan of the log into memory.
inline std::pair<std::vector<Scan>, LogStats> scans_from_log(
    std::istream& input, const LogSensorConfig& config) {
  std::vector<Scan> scans;
  LogStats stats = for_each_scan(
      input, config, [&scans](Scan&& scan) { scans.push_back(std::move(scan)); });
  return {std::move(scans), stats};
}

}  // namespace occfield

#endif  // OCCFIELD_CARMEN_HPP_
