#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hgr {

// Deterministic RNG used everywhere in the toolkit. Wraps mt19937_64 but
// derives doubles from raw bits directly, so sequences are identical across
// standard library implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via polar Box-Muller; second value cached.
  double normal(double mean, double sd) {
    if (has_cached_) {
      has_cached_ = false;
      return mean + sd * cached_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * f;
    has_cached_ = true;
    return mean + sd * u * f;
  }

  std::uint64_t bits() { return gen_(); }

  // Mix a stream tag into a seed (splitmix64 finalizer) so independent
  // sub-streams can be derived from one master seed.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

private:
  std::mt19937_64 gen_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

} // namespace hgr
