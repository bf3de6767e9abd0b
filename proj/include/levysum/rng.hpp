// Copyright 2026 the levysum authors
// SPDX-License-Identifier: Apache-2.0
//
// Counter-based random number streams. A stream is addressed by
// (seed, hi, lo); draws depend only on the address and the number of values
// consumed, never on which thread owns the stream. This is what makes every
// Monte Carlo result in this library independent of worker count.

#pragma once

#include <cmath>
#include <cstdint>

namespace levysum {

// SplitMix64 finalizer (Steele, Lea & Flood). Full-avalanche 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Weyl increment used to step the counter between outputs.
inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t hi = 0,
                     std::uint64_t lo = 0) noexcept
      : counter_(derive_key(seed, hi, lo)) {}

  std::uint64_t next_u64() noexcept {
    counter_ += kGoldenGamma;
    return mix64(counter_);
  }

  // Uniform on the open interval (0,1); safe to pass to log().
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  // Standard normal via Marsaglia's polar method, one spare cached per stream.
  double gaussian() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // Unit-mean exponential.
  double exponential() noexcept { return -std::log(uniform()); }

  std::uint64_t poisson(double mean) noexcept;

 private:
  static constexpr std::uint64_t derive_key(std::uint64_t seed,
                                            std::uint64_t hi,
                                            std::uint64_t lo) noexcept {
    std::uint64_t z = mix64(seed + kGoldenGamma);
    z = mix64((z ^ hi) + kGoldenGamma);
    z = mix64((z ^ lo) + kGoldenGamma);
    return z;
  }

  std::uint64_t counter_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace levysum
