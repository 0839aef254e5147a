#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace combss {

// Seedable generator with a fixed substream rule, so multi-replication
// experiments are reproducible regardless of scheduling. Substream k of base
// seed s re-seeds the engine with splitmix64(s + (k + 1) * golden). Gaussian
// draws use the polar method on top of raw 53-bit uniforms, keeping the
// stream independent of any standard-library distribution internals.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(mix(seed)) {}

  static Rng substream(uint64_t seed, uint64_t stream) {
    return Rng(seed + (stream + 1) * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal draw (polar method).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  uint64_t raw() { return engine_(); }

 private:
  static uint64_t mix(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace combss
