#pragma once

#include <cstdint>
#include <random>

namespace metacache {

// Seeded generator for workload traces. std::mt19937_64 has a fully
// specified output sequence; the bounded draws below avoid the standard
// distributions (whose outputs are implementation-defined), so the same
// seed makes the same trace on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t NextU64() { return eng_(); }

  // Uniform draw in [0, n) via 128-bit multiply-shift. n must be > 0.
  uint64_t Uniform(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(NextU64()) * n) >> 64);
  }

  // Uniform draw in [lo, hi] inclusive.
  uint64_t UniformRange(uint64_t lo, uint64_t hi) {
    return lo + Uniform(hi - lo + 1);
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double NextDouble() {
    return static_cast<double>(NextU64() >> 11) * (1.0 / 9007199254740992.0);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace metacache
