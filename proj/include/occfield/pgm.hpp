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

#ifndef OCCFIELD_PGM_HPP_
#define OCCFIELD_PGM_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "occfield/field.hpp"
#include "occfield/io.hpp"

namespace occfield {

/// The exact header emitted for a raster of the given size.
inline std::string pgm_header(std::size_t width, std::size_t height) {
  return "P5\n" + std::to_string(width) + " " + std::to_string(height) +
         "\n255\n";
}

/// Writes the raster as binary PGM (maxval 255, pixel = round(p * 255),
/// row 0 at the top / max-y) plus a `<path>.txt` sidecar recording the world
/// origin and resolution.
inline void write_pgm(const RasterMap& raster, const std::string& path) {
  if (raster.width == 0 || raster.height == 0 ||
      raster.values.size() != raster.width * raster.height ||
      raster.resolution <= 0.0) {
    throw std::invalid_argument("write_pgm: invalid raster");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("write_pgm: cannot open " + path);
  }
  out << pgm_header(raster.width, raster.height);
  std::vector<unsigned char> row(raster.width);
  for (std::size_t r = 0; r < raster.height; ++r) {
    for (std::size_t c = 0; c < raster.width; ++c) {
      const double p = raster.values[r * raster.width + c];
      row[c] = static_cast<unsigned char>(
          std::lround(std::clamp(p, 0.0, 1.0) * 255.0));
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size()));
  }
  if (!out) {
    throw std::runtime_error("write_pgm: write failed for " + path);
  }

  std::ofstream sidecar(path + ".txt", std::ios::binary);
  if (!sidecar) {
    throw std::runtime_error("write_pgm: cannot open " + path + ".txt");
  }
  sidecar << "origin_x=" << detail::format_double(raster.origin.x) << '\n'
          << "origin_y=" << detail::format_double(raster.origin.y) << '\n'
          << "resolution=" << detail::format_double(raster.resolution) << '\n'
          << "width=" << raster.width << '\n'
          << "height=" << raster.height << '\n';
}

}  // namespace occfield

#endif  // OCCFIELD_PGM_HPP_
