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

#ifndef OCCFIELD_IO_HPP_
#define OCCFIELD_IO_HPP_

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "occfield/carmen.hpp"
#include "occfield/environment.hpp"
#include "occfield/field.hpp"
#include "occfield/geometry.hpp"
#include "occfield/types.hpp"

// Line-oriented text formats. All real numbers are written in the shortest
// decimal form that parses back to the identical double, so every format
// here round-trips losslessly.
//
//   theta file       sigma_f=... (one key=value per line)
//   environment      "# occfield environment v1" then "poly x1 y1 x2 y2 ..."
//   trajectory       "# occfield trajectory v1" then "pose x y theta"
//   scans            "# occfield scans v1" then per scan a
//                    "scan x y theta max_range beam_count" line followed by
//                    "b bearing range is_max_range" lines
//   field snapshot   "ISINGFIELD1" magic, a theta line, a prior line, then
//                    "m pose_x pose_y heading bearing range flags" records
//                    (flags bit 0: free-space-only contribution)

namespace occfield {

namespace detail {

inline double parse_double_token(std::string_view token, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw std::runtime_error(std::string("expected a number for ") + what +
                             ", got '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace detail

// --- hyperparameter key-value files ---------------------------------------

inline void save_theta(const Hyperparameters& theta, std::ostream& out) {
  out << "sigma_f=" << detail::format_double(theta.sigma_f) << '\n'
      << "sigma_h=" << detail::format_double(theta.sigma_h) << '\n'
      << "l_p=" << detail::format_double(theta.l_p) << '\n'
      << "l_f=" << detail::format_double(theta.l_f) << '\n'
      << "l_b=" << detail::format_double(theta.l_b) << '\n';
}

inline Hyperparameters load_theta(std::istream& in) {
  std::map<std::string, double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("theta file: expected key=value, got '" + line +
                               "'");
    }
    values[line.substr(0, eq)] =
        detail::parse_double_token(std::string_view(line).substr(eq + 1),
                                   line.substr(0, eq).c_str());
  }
  Hyperparameters theta;
  auto required = [&values](const char* key) {
    const auto it = values.find(key);
    if (it == values.end()) {
      throw std::runtime_error(std::string("theta file: missing key ") + key);
    }
    return it->second;
  };
  theta.sigma_f = required("sigma_f");
  theta.sigma_h = required("sigma_h");
  theta.l_p = required("l_p");
  theta.l_f = required("l_f");
  theta.l_b = required("l_b");
  theta.validate();
  return theta;
}

// --- environment / trajectory ----------------------------------------------

inline void save_environment(const Environment& env, std::ostream& out) {
  out << "# occfield environment v1\n";
  for (const Polygon& poly : env.obstacles()) {
    out << "poly";
    for (const Point2& v : poly.vertices) {
      out << ' ' << detail::format_double(v.x) << ' '
          << detail::format_double(v.y);
    }
    out << '\n';
  }
}

inline Environment load_environment(std::istream& in) {
  std::vector<Polygon> polygons;
  std::string line;
  while (std::getline(in, line)) {
    const auto tokens = detail::split_whitespace(line);
    if (tokens.empty() || tokens[0].front() == '#') continue;
    if (tokens[0] != "poly") {
      throw std::runtime_error("environment file: unexpected line '" + line +
                               "'");
    }
    if (tokens.size() < 7 || (tokens.size() - 1) % 2 != 0) {
      throw std::runtime_error("environment file: polygon needs >= 3 x y "
                               "pairs");
    }
    Polygon poly;
    for (std::size_t i = 1; i + 1 < tokens.size(); i += 2) {
      poly.vertices.push_back(
          {detail::parse_double_token(tokens[i], "poly x"),
           detail::parse_double_token(tokens[i + 1], "poly y")});
    }
    polygons.push_back(std::move(poly));
  }
  return Environment(std::move(polygons));
}

inline void save_trajectory(const std::vector<Pose2>& poses,
                            std::ostream& out) {
  out << "# occfield trajectory v1\n";
  for (const Pose2& pose : poses) {
    out << "pose " << detail::format_double(pose.position.x) << ' '
        << detail::format_double(pose.position.y) << ' '
        << detail::format_double(pose.heading) << '\n';
  }
}

inline std::vector<Pose2> load_trajectory(std::istream& in) {
  std::vector<Pose2> poses;
  std::string line;
  while (std::getline(in, line)) {
    const auto tokens = detail::split_whitespace(line);
    if (tokens.empty() || tokens[0].front() == '#') continue;
    if (tokens[0] != "pose" || tokens.size() != 4) {
      throw std::runtime_error("trajectory file: expected 'pose x y theta', "
                               "got '" + line + "'");
    }
    poses.push_back({{detail::parse_double_token(tokens[1], "pose x"),
                      detail::parse_double_token(tokens[2], "pose y")},
                     detail::parse_double_token(tokens[3], "pose theta")});
  }
  return poses;
}

// --- scan sets ---------------------------------------------------------------

inline void save_scans(const std::vector<Scan>& scans, std::ostream& out) {
  out << "# occfield scans v1\n";
  for (const Scan& scan : scans) {
    out << "scan " << detail::format_double(scan.pose.position.x) << ' '
        << detail::format_double(scan.pose.position.y) << ' '
        << detail::format_double(scan.pose.heading) << ' '
        << detail::format_double(scan.max_range) << ' ' << scan.beams.size()
        << '\n';
    for (const Scan::Beam& beam : scan.beams) {
      out << "b " << detail::format_double(beam.bearing) << ' '
          << detail::format_double(beam.range) << ' '
          << (beam.is_max_range ? 1 : 0) << '\n';
    }
  }
}

inline std::vector<Scan> load_scans(std::istream& in) {
  std::vector<Scan> scans;
  std::string line;
  std::size_t pending_beams = 0;
  while (std::getline(in, line)) {
    const auto tokens = detail::split_whitespace(line);
    if (tokens.empty() || tokens[0].front() == '#') continue;
    if (tokens[0] == "scan") {
      if (pending_beams != 0) {
        throw std::runtime_error("scans file: truncated beam list");
      }
      if (tokens.size() != 6) {
        throw std::runtime_error(
            "scans file: expected 'scan x y theta max_range n'");
      }
      Scan scan;
      scan.pose = {{detail::parse_double_token(tokens[1], "scan x"),
                    detail::parse_double_token(tokens[2], "scan y")},
                   detail::parse_double_token(tokens[3], "scan theta")};
      scan.max_range = detail::parse_double_token(tokens[4], "max_range");
      pending_beams = static_cast<std::size_t>(
          detail::parse_double_token(tokens[5], "beam count"));
      scan.beams.reserve(pending_beams);
      scans.push_back(std::move(scan));
    } else if (tokens[0] == "b") {
      if (scans.empty() || pending_beams == 0) {
        throw std::runtime_error("scans file: beam line outside a scan");
      }
      if (tokens.size() != 4) {
        throw std::runtime_error(
            "scans file: expected 'b bearing range is_max_range'");
      }
      scans.back().beams.push_back(
          {detail::parse_double_token(tokens[1], "bearing"),
           detail::parse_double_token(tokens[2], "range"),
           detail::parse_double_token(tokens[3], "flag") != 0.0});
      --pending_beams;
    } else {
      throw std::runtime_error("scans file: unexpected line '" + line + "'");
    }
  }
  if (pending_beams != 0) {
    throw std::runtime_error("scans file: truncated beam list");
  }
  return scans;
}

// --- field snapshots ---------------------------------------------------------

inline constexpr std::string_view kFieldMagic = "ISINGFIELD1";

inline void save_field(const OccupancyField& field, std::ostream& out) {
  out << kFieldMagic << '\n';
  const Hyperparameters& theta = field.theta();
  out << "theta " << detail::format_double(theta.sigma_f) << ' '
      << detail::format_double(theta.sigma_h) << ' '
      << detail::format_double(theta.l_p) << ' '
      << detail::format_double(theta.l_f) << ' '
      << detail::format_double(theta.l_b) << '\n';
  out << "prior " << detail::format_double(field.options().prior_lambda)
      << '\n';
  for (const OccupancyField::Record& record : field.records()) {
    out << "m " << detail::format_double(record.pose.position.x) << ' '
        << detail::format_double(record.pose.position.y) << ' '
        << detail::format_double(record.pose.heading) << ' '
        << detail::format_double(record.bearing) << ' '
        << detail::format_double(record.range) << ' '
        << (record.free_space_only ? 1 : 0) << '\n';
  }
}

/// Rebuilds a field from a snapshot. `options` supplies query-time settings
/// (truncation, threads, ...); theta and the prior come from the snapshot.
inline OccupancyField load_field(std::istream& in, FieldOptions options = {}) {
  std::string line;
  if (!std::getline(in, line) ||
      std::string_view(line).substr(0, kFieldMagic.size()) != kFieldMagic) {
    throw std::runtime_error("field snapshot: bad magic");
  }
  std::optional<Hyperparameters> theta;
  std::optional<OccupancyField> field;
  while (std::getline(in, line)) {
    const auto tokens = detail::split_whitespace(line);
    if (tokens.empty() || tokens[0].front() == '#') continue;
    if (tokens[0] == "theta") {
      if (tokens.size() != 6) {
        throw std::runtime_error("field snapshot: bad theta line");
      }
      theta = Hyperparameters{
          detail::parse_double_token(tokens[1], "sigma_f"),
          detail::parse_double_token(tokens[2], "sigma_h"),
          detail::parse_double_token(tokens[3], "l_p"),
          detail::parse_double_token(tokens[4], "l_f"),
          detail::parse_double_token(tokens[5], "l_b")};
    } else if (tokens[0] == "prior") {
      if (!theta.has_value()) {
        throw std::runtime_error("field snapshot: prior before theta");
      }
      if (tokens.size() != 2) {
        throw std::runtime_error("field snapshot: bad prior line");
      }
      options.prior_lambda = detail::parse_double_token(tokens[1], "prior");
      field.emplace(*theta, options);
    } else if (tokens[0] == "m") {
      if (!field.has_value()) {
        throw std::runtime_error("field snapshot: record before header");
      }
      if (tokens.size() != 7) {
        throw std::runtime_error("field snapshot: bad measurement record");
      }
      OccupancyField::Record record;
      record.pose = {{detail::parse_double_token(tokens[1], "pose x"),
                      detail::parse_double_token(tokens[2], "pose y")},
                     detail::parse_double_token(tokens[3], "heading")};
      record.bearing = detail::parse_double_token(tokens[4], "bearing");
      record.range = detail::parse_double_token(tokens[5], "range");
      record.free_space_only =
          detail::parse_double_token(tokens[6], "flags") != 0.0;
      field->add_record(record);
    } else {
      throw std::runtime_error("field snapshot: unexpected line '" + line +
                               "'");
    }
  }
  if (!field.has_value()) {
    throw std::runtime_error("field snapshot: missing header");
  }
  return std::move(*field);
}

// --- file helpers ------------------------------------------------------------

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  return out;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  return in;
}

}  // namespace occfield

#endif  // OCCFIELD_IO_HPP_
