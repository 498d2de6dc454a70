#pragma once

// Counter-based random streams: every (seed, index) pair owns an independent
// generator, so results never depend on evaluation order or thread count.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Geometry>

#include "steerkit/state.hpp"

namespace steerkit {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of the child stream `index` of `seed`.
inline constexpr std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index));
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  RandomStream(std::uint64_t seed, std::uint64_t index) : RandomStream(split_seed(seed, index)) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return normal_(engine_); }
  Complex complex_normal() {
    const double re = normal();
    return {re, normal()};
  }

  /// Uniform on the unit sphere.
  Vector3 unit_vector() {
    Vector3 g;
    do {
      g = Vector3(normal(), normal(), normal());
    } while (g.norm() < 1e-12);
    return g.normalized();
  }

  /// Haar-uniform rotation (normalised Gaussian quaternion).
  Eigen::Quaterniond rotation() {
    Eigen::Vector4d g;
    do {
      g = Eigen::Vector4d(normal(), normal(), normal(), normal());
    } while (g.norm() < 1e-12);
    g.normalize();
    return Eigen::Quaterniond(g(0), g(1), g(2), g(3));
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace steerkit
