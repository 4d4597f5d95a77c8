#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace cyclesync {

// Counter-based generator on the splitmix64 mixer.  Streams are derived from
// (seed, s1, s2) so every bootstrap iteration owns an independent substream
// and parallel execution cannot change the draws.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : state_(key) {}

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  static Rng derive(std::uint64_t seed, std::uint64_t s1, std::uint64_t s2 = 0) {
    std::uint64_t k = seed;
    k = mix(k + kGolden * (s1 + 1));
    k = mix(k + kGolden * (s2 + 1));
    return Rng(k);
  }

  std::uint64_t next() {
    state_ += kGolden;
    return mix(state_);
  }

  // Uniform on (0,1), never exactly 0 or 1.
  double uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n) by mask rejection; unbiased.
  std::uint64_t uniform_below(std::uint64_t n) {
    std::uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      std::uint64_t v = next() & mask;
      if (v < n) return v;
    }
  }

  // Box-Muller; consumes exactly two uniforms per call.
  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t state_;
};

}  // namespace cyclesync
