#include "geotransfer/kepler_geodesic.hpp"

#include <cmath>
#include <numbers>

#include "geotransfer/errors.hpp"
#include "geotransfer/spectral.hpp"

namespace geotransfer {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCircularEcc = 1e-12;

}  // namespace

double EllipseTransfer::semi_latus() const { return a * (1.0 - e_vec.squaredNorm()); }

Vec3 EllipseTransfer::p_hat() const {
  const double e = ecc();
  return e < kCircularEcc ? Vec3(p0.normalized()) : Vec3(e_vec / e);
}

double a_min(const Vec3& p0, const Vec3& pf) {
  return 0.25 * (p0.norm() + pf.norm() + (p0 - pf).norm());
}

double energy_of_sma(double mu, double a) {
  if (!(a > 0.0)) throw DomainError("semi-major axis must be > 0");
  return -mu / (2.0 * a);
}

double sma_of_energy(double mu, double energy) {
  if (!(energy < 0.0)) throw DomainError("transfer energy must be < 0 (elliptic)");
  return -mu / (2.0 * energy);
}

double conic_residual(const EllipseTransfer& transfer, const Vec3& point) {
  const double p = transfer.semi_latus();
  return std::abs(point.norm() + transfer.e_vec.dot(point) - p) / p;
}

std::vector<EllipseTransfer> solve_transfer_ellipses(double mu, const Vec3& p0, const Vec3& pf,
                                                     double a) {
  if (!(mu > 0.0)) throw DomainError("mu must be > 0");
  const double r0 = p0.norm();
  const double rf = pf.norm();
  if (!(r0 > 0.0) || !(rf > 0.0)) throw SingularInputError("transfer endpoint at the origin");
  const Vec3 normal = p0.cross(pf);
  if (!(normal.norm() > 1e-12 * r0 * rf))
    throw DegeneratePlaneError("p0, pf and the origin are collinear; transfer plane undefined");
  const double amin = a_min(p0, pf);
  if (!(a >= amin * (1.0 - 1e-12)))
    throw InfeasibleSmaError("semi-major axis below a_min for this endpoint pair");

  const Vec3 n_hat = normal.normalized();
  const Vec3 chord = pf - p0;
  const double d = chord.norm();
  const Vec3 u = chord / d;
  const Vec3 w = n_hat.cross(u);
  const double rho0 = 2.0 * a - r0;
  const double rhof = 2.0 * a - rf;
  const double along = (d * d + rho0 * rho0 - rhof * rhof) / (2.0 * d);
  const double h = std::sqrt(std::max(0.0, rho0 * rho0 - along * along));
  const bool tangent = h <= 1e-8 * a;

  std::vector<EllipseTransfer> out;
  out.reserve(tangent ? 2 : 4);
  for (int focus = 0; focus < (tangent ? 1 : 2); ++focus) {
    const Vec3 vacant = p0 + along * u + (focus == 0 ? h : -h) * w;
    const double e = vacant.norm() / (2.0 * a);
    const Vec3 e_vec = e < kCircularEcc ? Vec3::Zero() : Vec3(-vacant / (2.0 * a));
    for (Arc arc : {Arc::Short, Arc::Long}) {
      EllipseTransfer t;
      t.a = a;
      t.e_vec = e_vec;
      t.h_hat = arc == Arc::Short ? n_hat : Vec3(-n_hat);
      t.arc = arc;
      t.p0 = p0;
      t.pf = pf;
      t.focus = focus;
      out.push_back(t);
    }
  }
  return out;
}

Vec3 velocity_at(const EllipseTransfer& transfer, double mu, const Vec3& point) {
  if (conic_residual(transfer, point) > 1e-6)
    throw PointNotOnEllipseError("point does not lie on the transfer ellipse");
  const Vec3 p_hat = transfer.p_hat();
  const Vec3 q_hat = transfer.h_hat.cross(p_hat);
  const double nu = std::atan2(p_hat.cross(point).dot(transfer.h_hat), p_hat.dot(point));
  const double e = transfer.ecc() < kCircularEcc ? 0.0 : transfer.ecc();
  return std::sqrt(mu / transfer.semi_latus()) *
         (-std::sin(nu) * p_hat + (e + std::cos(nu)) * q_hat);
}

DiscreteCurve to_discrete_curve(const EllipseTransfer& transfer, int n_nodes) {
  if (n_nodes < 3) throw DomainError("discrete curve needs at least 3 nodes");
  const Vec3 p_hat = transfer.p_hat();
  const Vec3 q_hat = transfer.h_hat.cross(p_hat);
  const double a = transfer.a;
  const double e = transfer.ecc() < kCircularEcc ? 0.0 : transfer.ecc();
  const double b = a * std::sqrt(1.0 - e * e);

  auto eccentric_anomaly = [&](const Vec3& r) {
    return std::atan2(r.dot(q_hat) / b, r.dot(p_hat) / a + e);
  };
  const double e0 = eccentric_anomaly(transfer.p0);
  double ef = eccentric_anomaly(transfer.pf);
  while (ef <= e0) ef += kTwoPi;
  while (ef > e0 + kTwoPi) ef -= kTwoPi;

  // Jacobi arclength along a Kepler orbit is proportional to E + e sin E.
  auto sigma = [e](double ecc_anom) { return ecc_anom + e * std::sin(ecc_anom); };
  const double s0 = sigma(e0);
  const double sf = sigma(ef);

  DiscreteCurve curve;
  curve.params = spectral::lobatto_params(n_nodes);
  curve.nodes.resize(n_nodes);
  for (int k = 0; k < n_nodes; ++k) {
    const double target = s0 + curve.params[k] * (sf - s0);
    double lo = e0;
    double hi = ef;
    double x = e0 + curve.params[k] * (ef - e0);
    for (int it = 0; it < 60; ++it) {
      const double f = sigma(x) - target;
      if (f > 0.0) hi = x; else lo = x;
      double next = x - f / (1.0 + e * std::cos(x));
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - x) <= 1e-15 * (1.0 + std::abs(x))) {
        x = next;
        break;
      }
      x = next;
    }
    curve.nodes[k] = a * (std::cos(x) - e) * p_hat + b * std::sin(x) * q_hat;
  }
  curve.nodes.front() = transfer.p0;
  curve.nodes.back() = transfer.pf;
  return curve;
}

}  // namespace geotransfer
