#include "geotransfer/jacobi_metric.hpp"

#include <cmath>
#include <sstream>

#include "geotransfer/errors.hpp"
#include "geotransfer/spectral.hpp"

namespace geotransfer {

void DiscreteCurve::validate() const {
  if (nodes.size() < 3) throw DomainError("discrete curve needs at least 3 nodes");
  if (params.size() != nodes.size()) throw DomainError("curve params and nodes differ in size");
  if (params.front() != 0.0 || params.back() != 1.0)
    throw DomainError("curve params must start at 0 and end at 1");
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    if (!(params[k] > params[k - 1])) throw DomainError("curve params must increase strictly");
    if (nodes[k] == nodes[k - 1]) throw DomainError("curve has coincident consecutive nodes");
  }
}

double JacobiMetric::conformal_factor(const Vec3& r) const {
  return 2.0 * (energy_ - potential(model_, r));
}

Vec3 JacobiMetric::grad_conformal_factor(const Vec3& r) const {
  return -2.0 * grad_potential(model_, r);
}

Mat3 JacobiMetric::hess_conformal_factor(const Vec3& r) const {
  return -2.0 * hess_potential(model_, r);
}

double JacobiMetric::checked_factor(const Vec3& r, std::ptrdiff_t node) const {
  const double phi = conformal_factor(r);
  if (!(phi > 0.0)) {
    std::ostringstream msg;
    msg << "outside the Hill region (2(E - V) = " << phi << ")";
    if (node >= 0) msg << " at curve node " << node;
    throw HillRegionError(msg.str(), node);
  }
  return phi;
}

Mat3 JacobiMetric::metric_at(const Vec3& r) const {
  return checked_factor(r) * Mat3::Identity();
}

Christoffel JacobiMetric::christoffel(const Vec3& r) const {
  const double phi = checked_factor(r);
  const Vec3 g = grad_conformal_factor(r);
  const double half_inv = 0.5 / phi;
  Christoffel gamma;
  for (int i = 0; i < 3; ++i) {
    Mat3& m = gamma[i];
    m.setZero();
    // delta^i_j d_k phi + delta^i_k d_j phi - delta_jk d_i phi
    m.row(i) += g.transpose();
    m.col(i) += g;
    m.diagonal().array() -= g(i);
    m *= half_inv;
  }
  return gamma;
}

Vec3 JacobiMetric::contract(const Vec3& r, const Vec3& v) const {
  const double phi = conformal_factor(r);
  const Vec3 g = grad_conformal_factor(r);
  return (g.dot(v) * v - 0.5 * v.squaredNorm() * g) / phi;
}

std::vector<Vec3> curve_tangents(const DiscreteCurve& curve) {
  const auto ops = spectral::for_params(curve.params);
  const auto n = static_cast<Eigen::Index>(curve.size());
  std::vector<Vec3> out(n, Vec3::Zero());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out[i] += ops.d1(i, j) * curve.nodes[j];
  return out;
}

namespace {

Eigen::VectorXd speed_squared_weighted(const JacobiMetric& metric, const DiscreteCurve& curve,
                                       const spectral::Collocation& ops) {
  const auto n = static_cast<Eigen::Index>(curve.size());
  Eigen::VectorXd q(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vec3 d = Vec3::Zero();
    for (Eigen::Index j = 0; j < n; ++j) d += ops.d1(i, j) * curve.nodes[j];
    q(i) = metric.checked_factor(curve.nodes[i], i) * d.squaredNorm();
  }
  return q;
}

}  // namespace

double curve_length(const JacobiMetric& metric, const DiscreteCurve& curve) {
  curve.validate();
  const auto ops = spectral::for_params(curve.params);
  const Eigen::VectorXd q = speed_squared_weighted(metric, curve, ops);
  return ops.quad.dot(q.cwiseSqrt());
}

double curve_energy(const JacobiMetric& metric, const DiscreteCurve& curve) {
  curve.validate();
  const auto ops = spectral::for_params(curve.params);
  return ops.quad.dot(speed_squared_weighted(metric, curve, ops));
}

std::vector<Vec3> geodesic_residual(const JacobiMetric& metric, const DiscreteCurve& curve) {
  curve.validate();
  const auto ops = spectral::for_params(curve.params);
  const auto n = static_cast<Eigen::Index>(curve.size());
  std::vector<Vec3> out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vec3 d1 = Vec3::Zero();
    Vec3 d2 = Vec3::Zero();
    for (Eigen::Index j = 0; j < n; ++j) {
      d1 += ops.d1(i, j) * curve.nodes[j];
      d2 += ops.d2(i, j) * curve.nodes[j];
    }
    metric.checked_factor(curve.nodes[i], i);
    out[i] = d2 + metric.contract(curve.nodes[i], d1);
  }
  return out;
}

double scaled_residual(const DiscreteCurve& curve, std::span<const Vec3> residual) {
  const auto tangents = curve_tangents(curve);
  double mean_speed = 0.0;
  for (const auto& t : tangents) mean_speed += t.norm();
  mean_speed /= static_cast<double>(tangents.size());
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < residual.size(); ++k) worst = std::max(worst, residual[k].norm());
  return worst / mean_speed;
}

}  // namespace geotransfer
