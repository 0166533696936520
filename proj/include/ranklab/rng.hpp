#pragma once

#include <cstdint>

namespace ranklab {

// Counter-based generator: every variate is a hash of
// (seed, height, curve index, draw channel). Draw order therefore never
// matters, and parallel generation reproduces the serial stream exactly.
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t height, std::uint64_t curve, std::uint64_t draw) const {
    std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL;
    z = mix(z ^ (height * 0x9e3779b97f4a7c15ULL));
    z = mix(z ^ (curve * 0xc2b2ae3d27d4eb4fULL));
    z = mix(z ^ (draw * 0x165667b19e3779f9ULL));
    return mix(z);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform(std::uint64_t height, std::uint64_t curve, std::uint64_t draw) const {
    return static_cast<double>(bits(height, curve, draw) >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t seed_;
};

}  // namespace ranklab
