#pragma once

#include <cstdint>
#include <random>

namespace aniso {

// Seeded RNG wrapper. Uniform doubles are derived from raw mt19937_64 output
// so that sequences are identical across standard-library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed)
      : engine_(mix(seed, 0x9e3779b97f4a7c15ull)), seed_base_(seed) {}

  // splitmix64-style mixer; also used to derive independent child seeds.
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  Rng derived(std::uint64_t tag) const { return Rng(mix(seed_base_, tag)); }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // uniform in [-1, 1]
  double symmetric() { return uniform(-1.0, 1.0); }

  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_base_;
};

}  // namespace aniso
