#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace geotransfer {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Central-body parameters: GM in km^3/s^2, dimensionless J2, equatorial radius in km.
struct BodyConstants {
  double mu = 0.0;
  double j2 = 0.0;
  double r_body = 0.0;

  void validate() const;
};

/// Cartesian position (km) and velocity (km/s).
struct OrbitState {
  Vec3 r = Vec3::Zero();
  Vec3 v = Vec3::Zero();
};

/// ForceFree is a zero potential; it exists so flat Jacobi metrics can be built
/// for geometric checks and is never used for orbit planning.
enum class GravityKind { Kepler, J2, ForceFree };

struct GravityModel {
  BodyConstants body;
  GravityKind kind = GravityKind::Kepler;

  /// Throws DomainError unless the body is valid and kind J2 carries j2 > 0.
  void validate() const;
};

/// Specific potential energy V(r) in km^2/s^2.
double potential(const GravityModel& model, const Vec3& r);
/// Analytic gradient of potential(); the Newtonian acceleration is its negative.
Vec3 grad_potential(const GravityModel& model, const Vec3& r);
/// Analytic Hessian of potential().
Mat3 hess_potential(const GravityModel& model, const Vec3& r);

/// 0.5 |v|^2 + V(r).
double specific_energy(const GravityModel& model, const OrbitState& state);

/// Integrates r'' = -grad V over `duration` seconds (negative runs backwards) with a
/// Runge-Kutta-Fehlberg 7(8) pair; relative tolerance `tol`, absolute 1e-9.
OrbitState propagate(const GravityModel& model, const OrbitState& state, double duration,
                     double tol = 1e-12);

/// Keplerian period 2 pi sqrt(a^3/mu) with a taken from the state's specific energy.
double osculating_period(const GravityModel& model, const OrbitState& state);

/// Kepler: n_per_period states uniform in true anomaly from periapsis (one period).
/// J2: n_periods * n_per_period states uniform in time over n_periods osculating periods.
std::vector<OrbitState> sample_orbit(const GravityModel& model, const OrbitState& state,
                                     int n_periods, int n_per_period);

/// Continuous position along an orbit by a parameter u in [0, 1].
///
/// Kepler orbits are closed: u is the true-anomaly fraction measured from periapsis
/// and wraps modulo 1. J2 orbits precess: u is the time fraction of the sampling
/// horizon (n_periods osculating periods), clamped to [0, 1], evaluated by propagating
/// from the nearest preceding sample so that sample k sits exactly at u = k / n.
class OrbitTrack {
 public:
  OrbitTrack(const GravityModel& model, const OrbitState& initial, int n_periods,
             int n_per_period);

  OrbitState state_at(double u) const;
  const std::vector<OrbitState>& samples() const { return samples_; }
  double sample_param(std::size_t k) const;
  bool periodic() const { return closed_; }
  const GravityModel& model() const { return model_; }
  /// Time spanned by u in [0, 1]: one period for Kepler, n_periods periods for J2.
  double horizon() const { return horizon_; }

 private:
  GravityModel model_;
  OrbitState initial_;
  bool closed_ = true;
  double horizon_ = 0.0;
  std::vector<OrbitState> samples_;
  // Kepler perifocal frame.
  Vec3 p_hat_ = Vec3::UnitX();
  Vec3 q_hat_ = Vec3::UnitY();
  double ecc_ = 0.0;
  double semi_latus_ = 0.0;
};

/// Perifocal-frame state on a Kepler orbit at true anomaly nu.
OrbitState kepler_state_at_anomaly(double mu, const Vec3& p_hat, const Vec3& q_hat, double ecc,
                                   double semi_latus, double nu);

}  // namespace geotransfer
