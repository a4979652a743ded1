#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace geotransfer::spectral {

/// Chebyshev-Lobatto points mapped to [0, 1], increasing, endpoints exact.
std::vector<double> lobatto_params(int n);

/// Polynomial collocation operators on a fixed set of distinct nodes in [0, 1].
///
/// Differentiation uses the barycentric formulas of Berrut and Trefethen (row sums
/// forced to zero); quadrature weights integrate the interpolant exactly.
struct Collocation {
  std::vector<double> params;
  std::vector<double> bary;   // barycentric weights, scaled to max |w| = 1
  Eigen::MatrixXd d1;         // d/ds at the nodes
  Eigen::MatrixXd d2;         // d2/ds2 at the nodes
  Eigen::VectorXd quad;       // weights for the integral over [0, 1]
  Eigen::MatrixXd cumulative; // row i integrates from 0 to params[i]

  static Collocation from_params(std::span<const double> params);

  std::size_t size() const { return params.size(); }

  /// Barycentric Lagrange weights of every node at s (exactly one-hot at a node).
  Eigen::VectorXd interpolation_row(double s) const;
};

/// Shared, lazily built Lobatto operators; safe to call concurrently.
const Collocation& lobatto(int n);

/// lobatto(n) if params are the Lobatto points, otherwise a freshly built set.
Collocation for_params(std::span<const double> params);

}  // namespace geotransfer::spectral
