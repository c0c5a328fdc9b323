#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace aoa {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Deterministic sub-seed for trial (a, b, c) of a run. Pure function of its
/// arguments, so parallel schedules reproduce the sequential results exactly.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b, std::uint64_t c) {
  std::uint64_t s = splitmix64(master ^ (0x9E3779B97F4A7C15ULL * (a + 1)));
  s = splitmix64(s ^ (0xC2B2AE3D27D4EB4FULL * (b + 1)));
  s = splitmix64(s ^ (0x165667B19E3779F9ULL * (c + 1)));
  return s;
}

/// Seeded random stream with explicit uniform / Gaussian mappings.
/// std::uniform_real_distribution and std::normal_distribution are
/// implementation-defined; mt19937_64 plus the mappings below are not, which
/// keeps every seeded run bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

  /// Standard normal via Box-Muller (one deviate per call; two draws).
  double gaussian() {
    const double u1 =
        (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double gaussian(double stddev) { return stddev * gaussian(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace aoa
