#pragma once

#include <array>
#include <span>
#include <vector>

#include "geotransfer/astro.hpp"

namespace geotransfer {

/// A curve sampled at increasing parameters s_k in [0, 1] with s_0 = 0 and s_last = 1.
struct DiscreteCurve {
  std::vector<Vec3> nodes;
  std::vector<double> params;

  std::size_t size() const { return nodes.size(); }
  const Vec3& front() const { return nodes.front(); }
  const Vec3& back() const { return nodes.back(); }

  /// Throws DomainError on fewer than 3 nodes, bad parameters or coincident neighbours.
  void validate() const;
};

/// Christoffel symbols of the second kind; entry [i](j, k) is Gamma^i_{jk}.
using Christoffel = std::array<Mat3, 3>;

/// Jacobi metric 2 (E - V(r)) I of a gravity model at fixed specific energy E.
///
/// The conformal factor phi = 2 (E - V) must be positive wherever the metric is used;
/// every checked accessor raises HillRegionError otherwise. Immutable after construction.
class JacobiMetric {
 public:
  JacobiMetric(GravityModel model, double energy) : model_(std::move(model)), energy_(energy) {}

  const GravityModel& model() const { return model_; }
  double energy() const { return energy_; }

  /// phi(r) = 2 (E - V(r)), unchecked.
  double conformal_factor(const Vec3& r) const;
  Vec3 grad_conformal_factor(const Vec3& r) const;
  Mat3 hess_conformal_factor(const Vec3& r) const;

  /// phi(r), raising HillRegionError when phi <= 0.
  double checked_factor(const Vec3& r, std::ptrdiff_t node = -1) const;

  Mat3 metric_at(const Vec3& r) const;
  Christoffel christoffel(const Vec3& r) const;

  /// Gamma^i_{jk}(r) v^j v^k without forming the rank-3 array.
  Vec3 contract(const Vec3& r, const Vec3& v) const;

 private:
  GravityModel model_;
  double energy_;
};

/// Length: quadrature of sqrt(c_s^T G c_s) on the curve's own collocation grid.
double curve_length(const JacobiMetric& metric, const DiscreteCurve& curve);
/// Riemannian energy: quadrature of c_s^T G c_s.
double curve_energy(const JacobiMetric& metric, const DiscreteCurve& curve);

/// R(s_k) = c'' + Gamma(c)(c', c') at every node (endpoint entries included).
std::vector<Vec3> geodesic_residual(const JacobiMetric& metric, const DiscreteCurve& curve);

/// max over interior nodes of |R_k| divided by the mean parametric speed |c'|.
/// Dimensionless; this is the convergence measure of the heat-flow solver.
double scaled_residual(const DiscreteCurve& curve, std::span<const Vec3> residual);

/// Node derivatives dc/ds from the curve's collocation grid.
std::vector<Vec3> curve_tangents(const DiscreteCurve& curve);

}  // namespace geotransfer
