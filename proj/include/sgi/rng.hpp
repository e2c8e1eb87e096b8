#pragma once

#include <cmath>
#include <cstdint>

namespace sgi {

// Splittable 64-bit generator (SplitMix64 core with a strong stream mixer).
// Each (seed, stream) pair yields an independent, reproducible sequence; draws
// depend only on those two values and the call count, never on thread schedule.
// Normal variates use Box-Muller on top of the raw stream so the sequence is
// identical on every platform, unlike std::normal_distribution.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream = 0) : state_(mix(seed ^ mix(stream ^ 0x9e3779b97f4a7c15ull))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Uniform on [0, 1).
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal, Box-Muller pair with caching.
  double next_normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = next_uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace sgi
