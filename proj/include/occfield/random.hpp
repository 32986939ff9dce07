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

#ifndef OCCFIELD_RANDOM_HPP_
#define OCCFIELD_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace occfield {

/// Seeded generator with hand-rolled distributions. std::*_distribution is
/// implementation-defined, which would make "same seed, same bytes"
/// guarantees toolchain-dependent; the mappings below are pinned.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    // Rejection-free modulo is fine here: n is tiny relative to 2^64 in all
    // call sites, so the bias is far below anything observable.
    return engine_() % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace occfield

#endif  // OCCFIELD_RANDOM_HPP_
