#pragma once

#include <cmath>
#include <cstdint>

namespace wlcanon {

// A (master seed, stream index) pair fully determines every draw of a trial.
// Distinct streams derived from one master seed are independent for all
// practical purposes, so parallel trials never share generator state.
struct RngSeed {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// splitmix64 stream. Output sequence depends only on the seed, not on the
// standard library, so results are reproducible within a build.
class Rng {
 public:
  explicit Rng(RngSeed seed)
      : state_(detail::mix64(seed.master) ^
               detail::mix64(detail::mix64(seed.stream + 0x5851f42d4c957f2dULL))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_unit() < p; }

  // Uniform in [0,bound); bound > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    // Rejection sampling on the top bits; bias-free.
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Number of Bernoulli(p) failures before the next success, for p in (0,1).
  // Caller supplies log(1-p) to avoid recomputing it per draw.
  std::uint64_t geometric_skip(double log_one_minus_p) {
    double u = next_unit();
    if (u <= 0.0) u = 0x1.0p-53;
    double g = std::floor(std::log(u) / log_one_minus_p);
    if (g < 0) g = 0;
    if (g > 9e18) return static_cast<std::uint64_t>(9e18);
    return static_cast<std::uint64_t>(g);
  }

 private:
  std::uint64_t state_;
};

}  // namespace wlcanon
