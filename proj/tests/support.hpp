#pragma once

#include <cmath>
#include <random>

#include "geotransfer/astro.hpp"

namespace testing_support {

using geotransfer::BodyConstants;
using geotransfer::GravityKind;
using geotransfer::GravityModel;
using geotransfer::Vec3;

inline constexpr double kEarthMu = 3.986e5;

inline GravityModel earth() { return {{kEarthMu, 0.0, 6378.0}, GravityKind::Kepler}; }
inline GravityModel jupiter_j2() { return {{126.687e6, 1.475e-2, 69911.0}, GravityKind::J2}; }

inline double rel(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

/// Uniform direction times a log-uniform radius in [r_lo, r_hi].
inline Vec3 random_point(std::mt19937_64& rng, double r_lo, double r_hi) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(std::log(r_lo), std::log(r_hi));
  Vec3 d(g(rng), g(rng), g(rng));
  return d.normalized() * std::exp(u(rng));
}

/// Circular equatorial state of radius r about `mu`, phase `theta`.
inline geotransfer::OrbitState circular(double mu, double r, double theta = 0.0) {
  const double v = std::sqrt(mu / r);
  return {Vec3(r * std::cos(theta), r * std::sin(theta), 0.0),
          Vec3(-v * std::sin(theta), v * std::cos(theta), 0.0)};
}

}  // namespace testing_support
