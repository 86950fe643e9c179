#pragma once

#include <cmath>
#include <cstdint>

namespace curv4 {

// Counter-based SplitMix64 stream. Every draw is a pure function of
// (seed, stream, counter), so sampled objects are reproducible across
// platforms and independent of call order elsewhere in the process.
class Rng {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  Rng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t salt = 0)
      : state_(mix(seed + kGamma) ^ mix(stream + 2 * kGamma) ^
               mix(salt + 3 * kGamma)) {}

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform on (0, 1]; never returns 0 so log() stays finite.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller; avoids std::normal_distribution, whose stream is
  // implementation-defined.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    double mag = std::sqrt(-2.0 * std::log(u1));
    double ang = 6.283185307179586476925286766559 * u2;
    spare_ = mag * std::sin(ang);
    have_spare_ = true;
    return mag * std::cos(ang);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace curv4
