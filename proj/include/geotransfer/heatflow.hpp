#pragma once

#include <functional>

#include "geotransfer/jacobi_metric.hpp"

namespace geotransfer {

/// The two ways around the primary: Direct sweeps the angle < pi from p0 to pf about
/// p0 x pf, Reflected goes the other way.
enum class Homotopy { Direct, Reflected };

struct HeatFlowConfig {
  int n_nodes = 25;             // Chebyshev-Lobatto nodes
  double residual_tol = 1e-6;   // on scaled_residual()
  double max_flow_time = 1e8;   // cap on pseudo-time tau
  double ode_tol = 5e-2;        // local error per tau step, relative to mean |c'|
  int max_steps = 400;
  int stall_steps = 50;         // give up after this many steps without a 10% gain

  void validate() const;
};

struct GeodesicResult {
  DiscreteCurve curve;
  double energy = 0.0;
  Homotopy homotopy = Homotopy::Direct;
  bool converged = false;
  double final_residual = 0.0;
  double residual_tol = 0.0;
  double length = 0.0;
  double flow_time = 0.0;
  int steps = 0;
};

/// Called after every accepted tau step with (tau, scaled residual).
using FlowObserver = std::function<void(double, double)>;

/// Planar circular-arc guess from p0 to pf with linearly interpolated radius. Raises
/// DegeneratePlaneError when p0 x pf = 0.
DiscreteCurve initial_curve(const Vec3& p0, const Vec3& pf, Homotopy homotopy, int n_nodes);

/// Evolves dc/tau = c_ss + Gamma(c)(c_s, c_s) from initial_curve() to steady state.
///
/// Interior nodes move, endpoints are Dirichlet data. Non-convergence is reported
/// through `converged`; leaving the Hill region raises HillRegionError.
GeodesicResult flow_to_geodesic(const JacobiMetric& metric, const Vec3& p0, const Vec3& pf,
                                Homotopy homotopy, const HeatFlowConfig& cfg);

/// Same flow from an arbitrary start curve; it is first interpolated onto cfg.n_nodes
/// Lobatto nodes if needed.
GeodesicResult flow_curve(const JacobiMetric& metric, const DiscreteCurve& start,
                          Homotopy homotopy, const HeatFlowConfig& cfg,
                          const FlowObserver& observer = {});

/// Barycentric interpolation onto an n-node Lobatto grid; residual re-evaluated.
GeodesicResult resample(const JacobiMetric& metric, const GeodesicResult& result, int n_nodes);

/// Interpolates any curve onto an n-node Lobatto grid, endpoints exact.
DiscreteCurve resample_curve(const DiscreteCurve& curve, int n_nodes);

/// Sign of the swept angle about `axis`: +1 counter-clockwise, -1 clockwise.
int winding_sign(const DiscreteCurve& curve, const Vec3& axis);

}  // namespace geotransfer
