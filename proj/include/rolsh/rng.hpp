#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rolsh {

/// Seedable 64-bit splitmix generator. Every stochastic component in the
/// project draws from one of these so that a single seed reproduces runs
/// bit-for-bit.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [0, hi).
  double uniform(double hi) { return uniform() * hi; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  /// One pair of independent standard normals via Box-Muller.
  void gaussian_pair(double& z0, double& z1) {
    double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
    double u2 = uniform();
    double mag = std::sqrt(-2.0 * std::log(u1));
    z0 = mag * std::cos(2.0 * std::numbers::pi * u2);
    z1 = mag * std::sin(2.0 * std::numbers::pi * u2);
  }

  double gaussian() {
    double z0, z1;
    gaussian_pair(z0, z1);
    return z0;
  }

  /// Derives an independent stream for a named component.
  SplitMix64 fork(std::uint64_t tag) const {
    SplitMix64 g(state_ ^ (0x953a55e1381bafd5ULL * (tag + 1)));
    g.next();
    return g;
  }

 private:
  std::uint64_t state_;
};

}  // namespace rolsh
