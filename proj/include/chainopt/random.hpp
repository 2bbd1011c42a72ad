#pragma once

#include <Eigen/Geometry>

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace chainopt {

/// splitmix64 finalizer; used to derive independent engine seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return mix_seed(mix_seed(a) ^ b);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix_seed(mix_seed(a, b) ^ c);
}

inline std::uint64_t double_bits(double v) { return std::bit_cast<std::uint64_t>(v); }

/// Uniform rotation via the subgroup algorithm: three uniforms map to a
/// Haar-distributed unit quaternion.
inline Eigen::Quaterniond uniform_rotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u1 = unit(rng);
  const double u2 = unit(rng);
  const double u3 = unit(rng);
  const double two_pi = 2.0 * std::numbers::pi;
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  return Eigen::Quaterniond(b * std::cos(two_pi * u3),  // w
                            a * std::sin(two_pi * u2),  // x
                            a * std::cos(two_pi * u2),  // y
                            b * std::sin(two_pi * u3)); // z
}

}  // namespace chainopt
