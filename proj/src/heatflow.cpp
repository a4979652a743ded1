#include "geotransfer/heatflow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "geotransfer/errors.hpp"
#include "geotransfer/spectral.hpp"

namespace geotransfer {

void HeatFlowConfig::validate() const {
  if (n_nodes < 5) throw DomainError("heat flow needs at least 5 nodes");
  if (!(residual_tol > 0.0) || !(ode_tol > 0.0) || !(max_flow_time > 0.0))
    throw DomainError("heat flow tolerances must be > 0");
  if (max_steps < 1 || stall_steps < 1)
    throw DomainError("heat flow needs max_steps >= 1 and stall_steps >= 1");
}

DiscreteCurve initial_curve(const Vec3& p0, const Vec3& pf, Homotopy homotopy, int n_nodes) {
  if (n_nodes < 3) throw DomainError("discrete curve needs at least 3 nodes");
  const double r0 = p0.norm();
  const double rf = pf.norm();
  if (!(r0 > 0.0) || !(rf > 0.0)) throw SingularInputError("curve endpoint at the origin");
  const Vec3 normal = p0.cross(pf);
  if (!(normal.norm() > 1e-12 * r0 * rf))
    throw DegeneratePlaneError("p0, pf and the origin are collinear; no arc plane");
  const Vec3 n_hat = normal.normalized();
  const Vec3 x_hat = p0 / r0;
  const Vec3 y_hat = n_hat.cross(x_hat);
  const double theta = std::atan2(normal.norm(), p0.dot(pf));
  const double sweep = homotopy == Homotopy::Direct ? theta : theta - 2.0 * std::numbers::pi;

  DiscreteCurve curve;
  curve.params = spectral::lobatto_params(n_nodes);
  curve.nodes.resize(n_nodes);
  for (int k = 0; k < n_nodes; ++k) {
    const double s = curve.params[k];
    const double ang = sweep * s;
    const double rad = r0 + (rf - r0) * s;
    curve.nodes[k] = rad * (std::cos(ang) * x_hat + std::sin(ang) * y_hat);
  }
  curve.nodes.front() = p0;
  curve.nodes.back() = pf;
  return curve;
}

DiscreteCurve resample_curve(const DiscreteCurve& curve, int n_nodes) {
  const auto src = spectral::for_params(curve.params);
  DiscreteCurve out;
  out.params = spectral::lobatto_params(n_nodes);
  out.nodes.resize(n_nodes);
  for (int k = 0; k < n_nodes; ++k) {
    const Eigen::VectorXd row = src.interpolation_row(out.params[k]);
    Vec3 p = Vec3::Zero();
    for (Eigen::Index j = 0; j < row.size(); ++j) p += row(j) * curve.nodes[j];
    out.nodes[k] = p;
  }
  out.nodes.front() = curve.nodes.front();
  out.nodes.back() = curve.nodes.back();
  return out;
}

int winding_sign(const DiscreteCurve& curve, const Vec3& axis) {
  double swept = 0.0;
  for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
    const Vec3& a = curve.nodes[k];
    const Vec3& b = curve.nodes[k + 1];
    swept += std::atan2(a.cross(b).dot(axis), a.dot(b));
  }
  return swept >= 0.0 ? 1 : -1;
}

namespace {

// Semi-discrete heat flow on the interior nodes of a Lobatto grid.
class FlowSystem {
 public:
  FlowSystem(const JacobiMetric& metric, const spectral::Collocation& ops)
      : metric_(metric), ops_(ops), n_(static_cast<Eigen::Index>(ops.size())), dim_(3 * (n_ - 2)) {}

  Eigen::Index dim() const { return dim_; }

  // Residual at interior nodes plus mean parametric speed. Returns the first node
  // outside the Hill region, or -1.
  std::ptrdiff_t residual(const std::vector<Vec3>& c, Eigen::VectorXd& out, double& mean_speed,
                          std::vector<Vec3>* tangents = nullptr) const {
    out.resize(dim_);
    mean_speed = 0.0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      Vec3 d1 = Vec3::Zero();
      for (Eigen::Index j = 0; j < n_; ++j) d1 += ops_.d1(i, j) * c[j];
      mean_speed += d1.norm();
      if (tangents) (*tangents)[i] = d1;
      if (i == 0 || i == n_ - 1) continue;
      if (!(metric_.conformal_factor(c[i]) > 0.0)) return i;
      Vec3 d2 = Vec3::Zero();
      for (Eigen::Index j = 0; j < n_; ++j) d2 += ops_.d2(i, j) * c[j];
      out.segment<3>(3 * (i - 1)) = d2 + metric_.contract(c[i], d1);
    }
    mean_speed /= static_cast<double>(n_);
    return -1;
  }

  // J = dR/dc on the interior unknowns.
  void jacobian(const std::vector<Vec3>& c, const std::vector<Vec3>& tangents,
                Eigen::MatrixXd& jac) const {
    jac.setZero(dim_, dim_);
    for (Eigen::Index i = 1; i < n_ - 1; ++i) {
      const Vec3& x = c[i];
      const Vec3& v = tangents[i];
      const double phi = metric_.conformal_factor(x);
      const Vec3 g = metric_.grad_conformal_factor(x);
      const Mat3 h = metric_.hess_conformal_factor(x);
      const double gv = g.dot(v);
      const double vv = v.squaredNorm();
      const Vec3 b = gv * v - 0.5 * vv * g;
      const Mat3 dv = (v * g.transpose() + gv * Mat3::Identity() - g * v.transpose()) / phi;
      const Mat3 dx = -b * g.transpose() / (phi * phi) +
                      (v * (h * v).transpose() - 0.5 * vv * h) / phi;
      const Eigen::Index row = 3 * (i - 1);
      for (Eigen::Index j = 1; j < n_ - 1; ++j) {
        Mat3 block = ops_.d1(i, j) * dv;
        block.diagonal().array() += ops_.d2(i, j);
        if (i == j) block += dx;
        jac.block<3, 3>(row, 3 * (j - 1)) = block;
      }
    }
  }

 private:
  const JacobiMetric& metric_;
  const spectral::Collocation& ops_;
  Eigen::Index n_;
  Eigen::Index dim_;
};

double max_block_norm(const Eigen::VectorXd& v) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < v.size(); k += 3) worst = std::max(worst, v.segment<3>(k).norm());
  return worst;
}

}  // namespace

GeodesicResult flow_curve(const JacobiMetric& metric, const DiscreteCurve& start,
                          Homotopy homotopy, const HeatFlowConfig& cfg,
                          const FlowObserver& observer) {
  cfg.validate();
  start.validate();
  const auto& ops = spectral::lobatto(cfg.n_nodes);
  std::vector<Vec3> c = start.nodes;
  bool on_grid = start.size() == ops.size();
  for (std::size_t k = 0; on_grid && k < ops.size(); ++k)
    on_grid = std::abs(start.params[k] - ops.params[k]) <= 1e-14;
  if (!on_grid) c = resample_curve(start, cfg.n_nodes).nodes;

  metric.checked_factor(c.front(), 0);
  metric.checked_factor(c.back(), static_cast<std::ptrdiff_t>(c.size()) - 1);

  const FlowSystem system(metric, ops);
  const auto n = static_cast<Eigen::Index>(c.size());
  std::vector<Vec3> tangents(n);
  Eigen::VectorXd res;
  double speed = 0.0;
  if (const auto bad = system.residual(c, res, speed, &tangents); bad >= 0) {
    metric.checked_factor(c[bad], bad);
  }

  GeodesicResult out;
  out.energy = metric.energy();
  out.homotopy = homotopy;
  out.residual_tol = cfg.residual_tol;

  double scaled = max_block_norm(res) / speed;
  double tau = 0.0;
  double dtau = 1e-3;
  Eigen::MatrixXd jac;
  Eigen::MatrixXd step_matrix;
  Eigen::VectorXd trial_res;
  std::vector<Vec3> trial(c);
  std::vector<Vec3> trial_tangents(n);
  int steps = 0;
  int attempts = 0;
  double best = scaled;
  int since_best = 0;
  std::ptrdiff_t last_bad = -1;

  while (scaled > cfg.residual_tol && tau < cfg.max_flow_time && steps < cfg.max_steps &&
         attempts < 4 * cfg.max_steps) {
    ++attempts;
    system.jacobian(c, tangents, jac);
    step_matrix = -jac;
    step_matrix.diagonal().array() += 1.0 / dtau;
    const Eigen::VectorXd delta = step_matrix.partialPivLu().solve(res);

    for (Eigen::Index i = 1; i < n - 1; ++i) trial[i] = c[i] + delta.segment<3>(3 * (i - 1));
    double trial_speed = 0.0;
    const auto bad = system.residual(trial, trial_res, trial_speed, &trial_tangents);
    const bool finite = bad < 0 && trial_res.allFinite() && std::isfinite(trial_speed);
    if (!finite) {
      last_bad = bad;
      dtau *= 0.25;
      if (dtau < 1e-14) break;
      continue;
    }
    const double err = 0.5 * dtau * max_block_norm(trial_res - res) / trial_speed;
    const double factor = err > 0.0 ? 0.9 * std::sqrt(cfg.ode_tol / err) : 5.0;
    if (err > cfg.ode_tol) {
      dtau *= std::max(0.2, factor);
      if (dtau < 1e-14) break;
      continue;
    }
    tau += dtau;
    ++steps;
    c.swap(trial);
    tangents.swap(trial_tangents);
    res.swap(trial_res);
    speed = trial_speed;
    scaled = max_block_norm(res) / speed;
    last_bad = -1;
    for (Eigen::Index i = 1; i < n - 1; ++i) trial[i] = c[i];
    if (observer) observer(tau, scaled);
    dtau *= std::clamp(factor, 0.2, 5.0);
    if (scaled < 0.9 * best) {
      best = scaled;
      since_best = 0;
    } else if (++since_best >= cfg.stall_steps) {
      break;
    }
  }

  if (scaled > cfg.residual_tol && last_bad >= 0)
    throw HillRegionError("heat flow left the Hill region at curve node " +
                              std::to_string(last_bad),
                          last_bad);

  out.curve.params = ops.params;
  out.curve.nodes = std::move(c);
  out.converged = scaled <= cfg.residual_tol;
  out.final_residual = scaled;
  out.flow_time = tau;
  out.steps = steps;
  out.length = curve_length(metric, out.curve);
  return out;
}

GeodesicResult flow_to_geodesic(const JacobiMetric& metric, const Vec3& p0, const Vec3& pf,
                                Homotopy homotopy, const HeatFlowConfig& cfg) {
  cfg.validate();
  return flow_curve(metric, initial_curve(p0, pf, homotopy, cfg.n_nodes), homotopy, cfg);
}

GeodesicResult resample(const JacobiMetric& metric, const GeodesicResult& result, int n_nodes) {
  GeodesicResult out = result;
  out.curve = resample_curve(result.curve, n_nodes);
  const auto residual = geodesic_residual(metric, out.curve);
  out.final_residual = scaled_residual(out.curve, residual);
  out.converged = result.converged && out.final_residual <= result.residual_tol;
  out.length = curve_length(metric, out.curve);
  return out;
}

}  // namespace geotransfer
