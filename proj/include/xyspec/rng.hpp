#pragma once

#include <cstdint>
#include <random>

#include "xyspec/model.hpp"

namespace xyspec {

/// Deterministic draws for the property suites. The mt19937_64 stream is
/// pinned by the standard, and uniforms are derived from raw 53-bit mantissas
/// so reports reproduce byte-for-byte for a fixed seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * unit(); }
  int range(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin() { return (gen_() & 1u) != 0; }

  /// Coupling draw from +/-[0.5, 2].
  double coupling() { return (coin() ? 1.0 : -1.0) * uniform(0.5, 2.0); }

  /// omega_j in [-1, 1], D_j in +/-[0.5, 2].
  PeriodicParameters params(int k) {
    PeriodicParameters p;
    p.k = k;
    for (int i = 0; i < k; ++i) {
      p.omega.push_back(uniform(-1.0, 1.0));
      p.coupling.push_back(coupling());
    }
    return p;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace xyspec
