#pragma once

#include <cstdint>

#include "pocmed/math.hpp"

namespace pocmed {

/// Counter-based pseudo-random generator built on the SplitMix64 finalizer.
///
/// Output i of stream s under seed k is the pure function
///   mix(key(k, s) + i * GOLDEN)
/// where key(k, s) = mix(mix(k ^ SALT) ^ s) and mix is the SplitMix64
/// finalizer. Streams are therefore cheap to derive by index (bootstrap
/// resample number, chunk number, ...) and every value is reproducible from
/// (seed, stream, counter) alone, independent of evaluation order or
/// parallelism.
///
/// Normal variates use the inverse-CDF transform (AS241) for cross-platform
/// bit stability.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(mix(seed ^ 0x5851F42D4C957F2Dull) ^ stream)) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGolden); }

  /// Uniform on the open interval (0, 1): 53 random bits centered on the
  /// half-step so the endpoints are unreachable (safe for quantile maps).
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_normal() { return normal_quantile(next_uniform()); }

  /// Uniform index in [0, n).
  std::uint64_t next_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(next_uniform() * static_cast<double>(n)) % n;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace pocmed
