#pragma once

#include <vector>

#include "geotransfer/astro.hpp"
#include "geotransfer/jacobi_metric.hpp"

namespace geotransfer {

/// Short traverses p0 -> pf counter-clockwise about p0 x pf (sweep < pi); Long goes
/// the other way round.
enum class Arc { Short, Long };

/// A Keplerian transfer conic through p0 and pf with a focus at the origin.
struct EllipseTransfer {
  double a = 0.0;
  Vec3 e_vec = Vec3::Zero();
  Vec3 h_hat = Vec3::UnitZ();
  Arc arc = Arc::Short;
  Vec3 p0 = Vec3::Zero();
  Vec3 pf = Vec3::Zero();
  int focus = 0;  // which vacant-focus intersection (0 or 1)

  double ecc() const { return e_vec.norm(); }
  double semi_latus() const;
  /// Periapsis direction; unit(p0) for a circle.
  Vec3 p_hat() const;
  /// 0..3 = 2 * focus + arc; stable branch label used by the planner.
  int branch() const { return 2 * focus + (arc == Arc::Long ? 1 : 0); }
};

/// Semi-major axis of the minimum-energy ellipse through both points.
double a_min(const Vec3& p0, const Vec3& pf);

/// E = -mu / (2a); throws DomainError unless a > 0.
double energy_of_sma(double mu, double a);
/// a = -mu / (2E); throws DomainError unless E < 0.
double sma_of_energy(double mu, double energy);

/// Relative conic-equation residual |r + e_vec . r - p| / p of a point.
double conic_residual(const EllipseTransfer& transfer, const Vec3& point);

/// Transfer ellipses of semi-major axis `a` through p0 and pf (vacant-focus
/// construction), each emitted for both traversal arcs: four candidates, or two when
/// the focus circles are tangent (a = a_min). Ordered by branch().
///
/// Raises InfeasibleSmaError for a < a_min and DegeneratePlaneError when p0 x pf = 0.
std::vector<EllipseTransfer> solve_transfer_ellipses(double mu, const Vec3& p0, const Vec3& pf,
                                                     double a);

/// Velocity on the transfer at p0 or pf. PointNotOnEllipseError beyond 1e-6 residual.
Vec3 velocity_at(const EllipseTransfer& transfer, double mu, const Vec3& point);

/// The chosen arc sampled at Chebyshev-Lobatto parameters, spaced uniformly in Jacobi
/// arclength (the affine parameter of the metric geodesic).
DiscreteCurve to_discrete_curve(const EllipseTransfer& transfer, int n_nodes);

}  // namespace geotransfer
