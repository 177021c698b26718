/* Copyright 2026 The scaleinv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace scaleinv {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of realization `index` under `master_seed`. Independent of how
/// realizations are scheduled across workers.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed,
                                    std::uint64_t index) noexcept {
  return splitmix64_mix(splitmix64_mix(master_seed ^ 0x5ca1e1e5ca1e1e5ULL) +
                        0x9e3779b97f4a7c15ULL * (index + 1));
}

/// Counter-based SplitMix64 stream: draw k of stream s under key K is
/// mix(K' + (k+1) * golden) with K' = mix(K ^ s). Any draw can be recomputed
/// from (key, stream, counter) alone.
///
/// Uniform and normal variates are built here rather than with <random>
/// distributions, whose output is implementation-defined.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key, std::uint64_t stream = 0) noexcept
      : key_(splitmix64_mix(key ^ splitmix64_mix(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next() noexcept {
    ++counter_;
    return splitmix64_mix(key_ + 0x9e3779b97f4a7c15ULL * counter_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi). Result is clamped into the interval so rounding
  /// cannot produce hi.
  double uniform(double lo, double hi) noexcept {
    double x = lo + (hi - lo) * uniform();
    return x < hi ? x : std::nextafter(hi, lo);
  }

  /// Uniform integer in [0, n). Rejection sampling, unbiased.
  std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  /// Standard normal by Box-Muller; the second variate is cached.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace scaleinv
