#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "geotransfer/astro.hpp"
#include "geotransfer/heatflow.hpp"
#include "geotransfer/kepler_geodesic.hpp"

namespace geotransfer {

enum class Backend { Ellipse, Heatflow };
enum class Mode { CoarseToFine, RefineOnly };
enum class Provenance { Coarse, Refined };

/// Initial and target orbits about one central body.
struct Problem {
  GravityModel model;
  OrbitState initial;
  OrbitState target;

  void validate() const;
};

struct PlannerConfig {
  Backend backend = Backend::Ellipse;
  int n_pos_samples = 90;      // per orbit (Kepler) or per osculating period (J2)
  int n_energy_samples = 3;
  int n_periods = 2;           // J2 sampling horizon in periods
  int n_best = 5;
  double multiplier = 2.0;     // a in [a_min, m a_min]; E in [E_min, E_min / m]
  int refine_generations = 1000;
  int population_size = 20;
  double refine_tol = 1e-12;
  bool use_mbh = true;
  double mbh_max_step = 0.05;
  int mbh_patience = 5;
  std::uint64_t seed = 0;
  HeatFlowConfig coarse_flow{25, 1e-6};
  HeatFlowConfig refine_flow{30, 1e-10};

  void validate() const;
};

/// A two-impulse transfer: endpoint impulses, the transfer arc and how it was found.
struct TransferSolution {
  Vec3 p0 = Vec3::Zero();
  Vec3 pf = Vec3::Zero();
  Vec3 v0 = Vec3::Zero();   // transfer velocity leaving p0
  Vec3 vf = Vec3::Zero();   // transfer velocity arriving at pf
  Vec3 dv0 = Vec3::Zero();
  Vec3 dvf = Vec3::Zero();
  double total_dv = 0.0;
  double energy = 0.0;
  double sma = 0.0;         // ellipse backend only
  double tof = 0.0;
  int branch = 0;           // 2 focus + arc, or 0 direct / 1 reflected
  double residual = 0.0;    // scaled geodesic residual of `curve`
  DiscreteCurve curve;
  Provenance provenance = Provenance::Coarse;
  Eigen::Vector4d x = Eigen::Vector4d::Zero();  // normalized decision vector
};

struct SearchDiagnostics {
  long pairs = 0;            // (p0, pf, energy) samples
  long candidates = 0;       // geodesics evaluated (branches included)
  long degenerate = 0;       // collinear endpoint pairs skipped
  long hill_violations = 0;
  long nonconverged = 0;
  long failed = 0;           // any other evaluation error
  long refine_evaluations = 0;

  bool operator==(const SearchDiagnostics&) const = default;
};

struct CoarseResult {
  std::vector<TransferSolution> best;  // ascending total_dv, ties by sample order
  SearchDiagnostics diagnostics;
};

/// Continuous endpoint parameterization of both orbits plus the sampled grid.
class TransferGeometry {
 public:
  TransferGeometry(const Problem& problem, const PlannerConfig& cfg);

  const Problem& problem() const { return problem_; }
  const OrbitTrack& initial() const { return initial_; }
  const OrbitTrack& target() const { return target_; }

 private:
  Problem problem_;
  OrbitTrack initial_;
  OrbitTrack target_;
};

/// Energy interval searched for a pair: [-mu / (2 a_min), upper] with upper at
/// a = m a_min (ellipse) or E_min / m (heatflow). Returns (lower, upper).
std::pair<double, double> energy_bounds(Backend backend, double mu, const Vec3& p0,
                                        const Vec3& pf, double multiplier);

/// Decoded decision vector.
struct Decision {
  double u0 = 0.0;
  double uf = 0.0;
  double w = 0.0;
  int branch = 0;
};
Decision decode(Backend backend, const Eigen::Vector4d& x);
Eigen::Vector4d encode(Backend backend, const Decision& d);

/// Impulses for an ellipse arc between two orbit states.
TransferSolution evaluate_dv(const OrbitState& s0, const OrbitState& sf,
                             const EllipseTransfer& transfer, double mu);
/// Impulses for a numerical geodesic; transfer speed sqrt(2 (E - V)) along the unit
/// endpoint tangent. TangentDegeneracyError for a vanishing endpoint tangent.
TransferSolution evaluate_dv(const OrbitState& s0, const OrbitState& sf,
                             const GeodesicResult& geodesic, const GravityModel& model);

/// Total impulse of one ellipse branch at semi-major axis a, or +inf when the branch
/// does not exist. At tangency the focus-1 branches fall back to focus 0.
double ellipse_branch_dv(double mu, const OrbitState& s0, const OrbitState& sf, double a,
                         int branch);

/// Full evaluation of a decision vector; throws on infeasible geometry.
TransferSolution evaluate_decision(const TransferGeometry& geometry, const PlannerConfig& cfg,
                                   const Eigen::Vector4d& x, const HeatFlowConfig& flow);

/// Objective used by the optimizer: total impulse, +inf on any failure.
double decision_cost(const TransferGeometry& geometry, const PlannerConfig& cfg,
                     const Eigen::Vector4d& x, const HeatFlowConfig& flow);

/// Sampled search over every (p0, pf, energy, branch). Rows of the initial orbit are
/// processed in parallel and merged by sample index, so the result is identical to
/// coarse_search_serial. EmptyResultError when nothing is feasible.
CoarseResult coarse_search(const TransferGeometry& geometry, const PlannerConfig& cfg);
CoarseResult coarse_search_serial(const TransferGeometry& geometry, const PlannerConfig& cfg);

/// Time-parameterized trajectory along a solution curve.
struct Trajectory {
  std::vector<double> t;
  std::vector<OrbitState> states;
  double tof = 0.0;
};

/// Reparameterizes the curve by dt = |dc| / sqrt(2 (E - V)) and samples n states at
/// uniform s. Speeds satisfy |v|^2 = 2 (E - V(r)).
Trajectory reconstruct_states(const GravityModel& model, const TransferSolution& solution,
                              int n_samples = 200);

/// Flies the reconstructed departure state for tof and returns |r(tof) - pf|.
double propagation_miss(const GravityModel& model, const TransferSolution& solution);

struct RefineResult {
  TransferSolution best;
  long evaluations = 0;
};

/// CMA-ES (optionally inside monotonic basin hopping) from each seed; the best of all
/// runs, never worse than the best seed.
RefineResult refine(const TransferGeometry& geometry, const PlannerConfig& cfg,
                    const std::vector<TransferSolution>& seeds);

/// CMA-ES from an evenly spaced population of minimum-energy ellipses, no MBH.
RefineResult refine_only(const TransferGeometry& geometry, const PlannerConfig& cfg);

struct PlanResult {
  TransferSolution best;
  std::vector<TransferSolution> coarse;
  SearchDiagnostics diagnostics;
};

PlanResult solve(const Problem& problem, const PlannerConfig& cfg, Mode mode);

/// Optimal total impulse on an n0 x nf grid of anomaly fractions u_i = i / (n - 1)
/// (the last row repeats the first). Each cell minimizes over a and the four ellipse
/// branches; degenerate cells are NaN. Row i is the initial orbit.
Eigen::MatrixXd contour_grid(const TransferGeometry& geometry, const PlannerConfig& cfg,
                             int n0, int nf);
Eigen::MatrixXd contour_grid_serial(const TransferGeometry& geometry,
                                    const PlannerConfig& cfg, int n0, int nf);

/// Best over a in [a_min, m a_min] and all branches for one endpoint pair: a bracketing
/// scan followed by golden-section search (1e-10 relative). NaN if degenerate.
double best_dv_for_pair(double mu, const OrbitState& s0, const OrbitState& sf,
                        double multiplier);

}  // namespace geotransfer
