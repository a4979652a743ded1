#include "geotransfer/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "geotransfer/cmaes.hpp"
#include "geotransfer/errors.hpp"
#include "geotransfer/spectral.hpp"
#include "planner_detail.hpp"

namespace geotransfer {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinEnergyOffset = 1e-6;  // a = a_min (1 + eps) for refine-only seeds
constexpr double kRefineOnlySigma = 0.3;

void set_impulses(TransferSolution& sol, const OrbitState& s0, const OrbitState& sf) {
  sol.dv0 = sol.v0 - s0.v;
  sol.dvf = sf.v - sol.vf;
  sol.total_dv = sol.dv0.norm() + sol.dvf.norm();
}

const EllipseTransfer* pick_branch(const std::vector<EllipseTransfer>& transfers, int branch) {
  for (const auto& t : transfers)
    if (t.branch() == branch) return &t;
  // Tangent focus circles: the second focus coincides with the first.
  if (branch >= 2)
    for (const auto& t : transfers)
      if (t.branch() == branch - 2) return &t;
  return nullptr;
}

// Stored ellipse curves get enough nodes to resolve the arc as a metric geodesic.
void attach_ellipse_curve(TransferSolution& sol, const EllipseTransfer& transfer,
                          const GravityModel& model) {
  const JacobiMetric metric(model, sol.energy);
  double best = kInf;
  for (int n : {32, 64, 128, 256}) {
    DiscreteCurve curve = to_discrete_curve(transfer, n);
    const double res = scaled_residual(curve, geodesic_residual(metric, curve));
    if (res < best) {
      best = res;
      sol.curve = std::move(curve);
    }
    if (best <= 1e-8) break;
  }
  sol.residual = best;
}

Eigen::Vector4d to_vector4(const Eigen::VectorXd& x) {
  return Eigen::Vector4d(x(0), x(1), x(2), x(3));
}

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

void Problem::validate() const {
  model.validate();
  for (const OrbitState* s : {&initial, &target}) {
    if (!(s->r.norm() > 0.0)) throw DomainError("orbit state position must be nonzero");
    if (!s->r.allFinite() || !s->v.allFinite()) throw DomainError("orbit state is not finite");
    if (!(specific_energy(model, *s) < 0.0)) throw DomainError("orbit is not elliptic");
  }
}

void PlannerConfig::validate() const {
  if (n_pos_samples < 2) throw DomainError("n_pos_samples must be >= 2");
  if (n_energy_samples < 1 || n_periods < 1 || n_best < 1 || refine_generations < 1 ||
      population_size < 2 || mbh_patience < 1)
    throw DomainError("planner counts must be >= 1 (population >= 2)");
  if (!(multiplier > 1.0)) throw DomainError("multiplier must be > 1");
  if (!(mbh_max_step > 0.0 && mbh_max_step <= 1.0))
    throw DomainError("mbh_max_step must lie in (0, 1]");
  if (!(refine_tol > 0.0)) throw DomainError("refine_tol must be > 0");
  coarse_flow.validate();
  refine_flow.validate();
}

TransferGeometry::TransferGeometry(const Problem& problem, const PlannerConfig& cfg)
    : problem_(problem),
      initial_(problem.model, problem.initial, cfg.n_periods, cfg.n_pos_samples),
      target_(problem.model, problem.target, cfg.n_periods, cfg.n_pos_samples) {
  problem.validate();
  cfg.validate();
  if (cfg.backend == Backend::Ellipse && problem.model.kind != GravityKind::Kepler)
    throw DomainError("the ellipse backend needs a Kepler gravity model");
}

std::pair<double, double> energy_bounds(Backend backend, double mu, const Vec3& p0,
                                        const Vec3& pf, double multiplier) {
  const double e_min = energy_of_sma(mu, a_min(p0, pf));
  if (backend == Backend::Ellipse) return {e_min, energy_of_sma(mu, multiplier * a_min(p0, pf))};
  return {e_min, e_min / multiplier};
}

Decision decode(Backend backend, const Eigen::Vector4d& x) {
  Decision d;
  d.u0 = x(0);
  d.uf = x(1);
  d.w = std::clamp(x(2), 0.0, 1.0);
  const double b = std::clamp(x(3), 0.0, 1.0);
  if (backend == Backend::Ellipse)
    d.branch = std::min(3, static_cast<int>(std::floor(4.0 * b)));
  else
    d.branch = b < 0.5 ? 0 : 1;
  return d;
}

Eigen::Vector4d encode(Backend backend, const Decision& d) {
  const double b = backend == Backend::Ellipse ? (d.branch + 0.5) / 4.0 : (d.branch ? 0.75 : 0.25);
  return {d.u0, d.uf, d.w, b};
}

TransferSolution evaluate_dv(const OrbitState& s0, const OrbitState& sf,
                             const EllipseTransfer& transfer, double mu) {
  TransferSolution sol;
  sol.p0 = transfer.p0;
  sol.pf = transfer.pf;
  sol.v0 = velocity_at(transfer, mu, transfer.p0);
  sol.vf = velocity_at(transfer, mu, transfer.pf);
  sol.sma = transfer.a;
  sol.energy = energy_of_sma(mu, transfer.a);
  sol.branch = transfer.branch();
  set_impulses(sol, s0, sf);
  return sol;
}

TransferSolution evaluate_dv(const OrbitState& s0, const OrbitState& sf,
                             const GeodesicResult& geodesic, const GravityModel& model) {
  const DiscreteCurve& curve = geodesic.curve;
  const JacobiMetric metric(model, geodesic.energy);
  const auto tangents = curve_tangents(curve);
  const double scale = std::max((curve.back() - curve.front()).norm(), curve.front().norm());
  const Vec3& t0 = tangents.front();
  const Vec3& tf = tangents.back();
  if (!(t0.norm() > 1e-12 * scale) || !(tf.norm() > 1e-12 * scale))
    throw TangentDegeneracyError("geodesic endpoint tangent vanishes");

  TransferSolution sol;
  sol.p0 = curve.front();
  sol.pf = curve.back();
  sol.v0 = std::sqrt(metric.checked_factor(sol.p0, 0)) * t0.normalized();
  sol.vf = std::sqrt(metric.checked_factor(sol.pf, static_cast<std::ptrdiff_t>(curve.size()) - 1)) *
           tf.normalized();
  sol.energy = geodesic.energy;
  sol.branch = geodesic.homotopy == Homotopy::Direct ? 0 : 1;
  sol.residual = geodesic.final_residual;
  sol.curve = curve;
  set_impulses(sol, s0, sf);
  return sol;
}

double ellipse_branch_dv(double mu, const OrbitState& s0, const OrbitState& sf, double a,
                         int branch) {
  try {
    const auto transfers = solve_transfer_ellipses(mu, s0.r, sf.r, a);
    const EllipseTransfer* t = pick_branch(transfers, branch);
    if (!t) return kInf;
    const Vec3 dv0 = velocity_at(*t, mu, t->p0) - s0.v;
    const Vec3 dvf = sf.v - velocity_at(*t, mu, t->pf);
    return dv0.norm() + dvf.norm();
  } catch (const Error&) {
    return kInf;
  }
}

namespace detail {

double level_w(Backend backend, int k, int n) {
  if (backend == Backend::Heatflow) return static_cast<double>(k + 1) / n;
  return n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
}

bool collinear(const Vec3& p0, const Vec3& pf) {
  return !(p0.cross(pf).norm() > 1e-12 * p0.norm() * pf.norm());
}

TransferSolution solution_between(const TransferGeometry& geometry, const PlannerConfig& cfg,
                                  const OrbitState& s0, const OrbitState& sf, double w,
                                  int branch, const HeatFlowConfig& flow, bool finish) {
  const GravityModel& model = geometry.problem().model;
  const double mu = model.body.mu;
  const double amin = a_min(s0.r, sf.r);
  TransferSolution sol;
  if (cfg.backend == Backend::Ellipse) {
    const double a = amin * (1.0 + (cfg.multiplier - 1.0) * w);
    const auto transfers = solve_transfer_ellipses(mu, s0.r, sf.r, a);
    const EllipseTransfer* t = pick_branch(transfers, branch);
    if (!t) throw DomainError("requested ellipse branch does not exist");
    sol = evaluate_dv(s0, sf, *t, mu);
    if (finish) attach_ellipse_curve(sol, *t, model);
  } else {
    const double e_min = energy_of_sma(mu, amin);
    const double energy = e_min * (1.0 + (1.0 / cfg.multiplier - 1.0) * w);
    const JacobiMetric metric(model, energy);
    const auto geodesic = flow_to_geodesic(metric, s0.r, sf.r,
                                           branch == 0 ? Homotopy::Direct : Homotopy::Reflected, flow);
    sol = evaluate_dv(s0, sf, geodesic, model);
    if (!geodesic.converged) sol.residual = std::max(sol.residual, flow.residual_tol * 2.0);
  }
  if (finish) sol.tof = reconstruct_states(model, sol, 2).tof;
  return sol;
}

}  // namespace detail

TransferSolution evaluate_decision(const TransferGeometry& geometry, const PlannerConfig& cfg,
                                   const Eigen::Vector4d& x, const HeatFlowConfig& flow) {
  const Decision d = decode(cfg.backend, x);
  const OrbitState s0 = geometry.initial().state_at(d.u0);
  const OrbitState sf = geometry.target().state_at(d.uf);
  TransferSolution sol = detail::solution_between(geometry, cfg, s0, sf, d.w, d.branch, flow, true);
  sol.x = x;
  return sol;
}

double decision_cost(const TransferGeometry& geometry, const PlannerConfig& cfg,
                     const Eigen::Vector4d& x, const HeatFlowConfig& flow) {
  const Decision d = decode(cfg.backend, x);
  try {
    const OrbitState s0 = geometry.initial().state_at(d.u0);
    const OrbitState sf = geometry.target().state_at(d.uf);
    if (cfg.backend == Backend::Ellipse) {
      const double a = a_min(s0.r, sf.r) * (1.0 + (cfg.multiplier - 1.0) * d.w);
      return ellipse_branch_dv(geometry.problem().model.body.mu, s0, sf, a, d.branch);
    }
    const TransferSolution sol =
        detail::solution_between(geometry, cfg, s0, sf, d.w, d.branch, flow, false);
    return sol.residual <= flow.residual_tol ? sol.total_dv : kInf;
  } catch (const Error&) {
    return kInf;
  }
}

Trajectory reconstruct_states(const GravityModel& model, const TransferSolution& solution,
                              int n_samples) {
  if (n_samples < 2) throw DomainError("trajectory needs at least 2 samples");
  const DiscreteCurve& curve = solution.curve;
  curve.validate();
  const JacobiMetric metric(model, solution.energy);
  const auto ops = spectral::for_params(curve.params);
  const auto n = static_cast<Eigen::Index>(curve.size());

  std::vector<Vec3> tangents(n, Vec3::Zero());
  Eigen::VectorXd rate(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) tangents[i] += ops.d1(i, j) * curve.nodes[j];
    rate(i) = tangents[i].norm() / std::sqrt(metric.checked_factor(curve.nodes[i], i));
  }
  const Eigen::VectorXd t_nodes = ops.cumulative * rate;

  Trajectory out;
  out.tof = t_nodes(n - 1);
  out.t.resize(n_samples);
  out.states.resize(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    const double s = static_cast<double>(k) / (n_samples - 1);
    const Eigen::VectorXd row = ops.interpolation_row(s);
    Vec3 r = Vec3::Zero();
    Vec3 tan = Vec3::Zero();
    for (Eigen::Index j = 0; j < n; ++j) {
      r += row(j) * curve.nodes[j];
      tan += row(j) * tangents[j];
    }
    if (k == 0) r = curve.front();
    if (k == n_samples - 1) r = curve.back();
    out.t[k] = k == 0 ? 0.0 : (k == n_samples - 1 ? out.tof : row.dot(t_nodes));
    out.states[k].r = r;
    out.states[k].v = std::sqrt(metric.checked_factor(r)) * tan.normalized();
  }
  return out;
}

double propagation_miss(const GravityModel& model, const TransferSolution& solution) {
  const OrbitState end = propagate(model, {solution.p0, solution.v0}, solution.tof, 1e-12);
  return (end.r - solution.pf).norm();
}

namespace {

UnitBox decision_box(const TransferGeometry& geometry) {
  return UnitBox{{geometry.initial().periodic(), geometry.target().periodic(), false, false}};
}

}  // namespace

RefineResult refine(const TransferGeometry& geometry, const PlannerConfig& cfg,
                    const std::vector<TransferSolution>& seeds) {
  if (seeds.empty()) throw DomainError("refinement needs at least one seed");
  const UnitBox box = decision_box(geometry);
  const Objective objective = [&](const Eigen::VectorXd& x) {
    return decision_cost(geometry, cfg, to_vector4(x), cfg.refine_flow);
  };
  CmaesSettings local;
  local.population = cfg.population_size;
  local.generations = cfg.refine_generations;
  local.ftol = cfg.refine_tol;
  local.sigma0 = cfg.mbh_max_step;
  const BasinHoppingSettings hop{cfg.mbh_max_step, cfg.mbh_patience};

  RefineResult out;
  Optimum best;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    auto rng = seeded_rng(cfg.seed, i);
    const Eigen::VectorXd x0 = seeds[i].x;
    const Optimum run = cfg.use_mbh
                            ? basin_hop(objective, x0, box, local, hop, rng)
                            : cmaes_minimize(objective, x0, box, local, rng, std::span(&x0, 1));
    out.evaluations += run.evaluations;
    if (run.f < best.f) best = run;
  }
  if (!std::isfinite(best.f)) throw EmptyResultError("refinement found no feasible transfer");

  out.best = evaluate_decision(geometry, cfg, to_vector4(best.x), cfg.refine_flow);
  out.best.provenance = Provenance::Refined;
  if (cfg.backend == Backend::Ellipse) {
    // Same objective as the scan: never hand back something worse than a seed.
    const auto seed = std::min_element(seeds.begin(), seeds.end(), [](const auto& a, const auto& b) {
      return a.total_dv < b.total_dv;
    });
    if (seed->total_dv < out.best.total_dv) out.best = *seed;
  }
  return out;
}

RefineResult refine_only(const TransferGeometry& geometry, const PlannerConfig& cfg) {
  if (cfg.backend != Backend::Ellipse) throw DomainError("refine-only needs the ellipse backend");
  const UnitBox box = decision_box(geometry);
  const Objective objective = [&](const Eigen::VectorXd& x) {
    return decision_cost(geometry, cfg, to_vector4(x), cfg.refine_flow);
  };
  const int grid = std::max(1, static_cast<int>(std::floor(std::sqrt(cfg.population_size / 2.0))));
  const double w = kMinEnergyOffset / (cfg.multiplier - 1.0);
  std::vector<Eigen::VectorXd> population;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j)
      for (int branch : {0, 1})
        population.push_back(encode(Backend::Ellipse,
                                    {static_cast<double>(i) / grid, static_cast<double>(j) / grid, w, branch}));

  CmaesSettings settings;
  settings.population = cfg.population_size;
  settings.generations = cfg.refine_generations;
  settings.ftol = cfg.refine_tol;
  settings.sigma0 = kRefineOnlySigma;
  auto rng = seeded_rng(cfg.seed, 0);
  Optimum best = cmaes_minimize(objective, population.front(), box, settings, rng, population);
  long evaluations = best.evaluations;
  if (cfg.use_mbh) {
    CmaesSettings local = settings;
    local.sigma0 = cfg.mbh_max_step;
    const Optimum hopped = basin_hop(objective, best.x, box, local,
                                     {cfg.mbh_max_step, cfg.mbh_patience}, rng);
    evaluations += hopped.evaluations;
    if (hopped.f < best.f) best = hopped;
  }
  if (!std::isfinite(best.f)) throw EmptyResultError("refinement found no feasible transfer");

  RefineResult out;
  out.best = evaluate_decision(geometry, cfg, to_vector4(best.x), cfg.refine_flow);
  out.best.provenance = Provenance::Refined;
  out.evaluations = evaluations;
  return out;
}

PlanResult solve(const Problem& problem, const PlannerConfig& cfg, Mode mode) {
  const TransferGeometry geometry(problem, cfg);
  PlanResult out;
  if (mode == Mode::RefineOnly) {
    const RefineResult r = refine_only(geometry, cfg);
    out.best = r.best;
    out.diagnostics.refine_evaluations = r.evaluations;
    return out;
  }
  CoarseResult coarse = coarse_search(geometry, cfg);
  const RefineResult r = refine(geometry, cfg, coarse.best);
  out.best = r.best;
  out.coarse = std::move(coarse.best);
  out.diagnostics = coarse.diagnostics;
  out.diagnostics.refine_evaluations = r.evaluations;
  return out;
}

double best_dv_for_pair(double mu, const OrbitState& s0, const OrbitState& sf,
                        double multiplier) {
  if (detail::collinear(s0.r, sf.r)) return std::numeric_limits<double>::quiet_NaN();
  constexpr int kScan = 24;
  const double amin = a_min(s0.r, sf.r);
  const double span = (multiplier - 1.0) * amin;
  auto a_at = [&](int k) { return amin + span * k / kScan; };

  std::array<std::array<double, kScan + 1>, 4> scan;
  for (int k = 0; k <= kScan; ++k)
    for (int b = 0; b < 4; ++b) scan[b][k] = ellipse_branch_dv(mu, s0, sf, a_at(k), b);

  double best = kInf;
  constexpr double kInvPhi = 0.6180339887498949;
  for (int b = 0; b < 4; ++b) {
    const auto it = std::min_element(scan[b].begin(), scan[b].end());
    if (!std::isfinite(*it)) continue;
    best = std::min(best, *it);
    const int k = static_cast<int>(it - scan[b].begin());
    double lo = a_at(std::max(k - 1, 0));
    double hi = a_at(std::min(k + 1, kScan));
    auto f = [&](double a) { return ellipse_branch_dv(mu, s0, sf, a, b); };
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > 1e-10 * hi) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kInvPhi * (hi - lo);
        f1 = f(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kInvPhi * (hi - lo);
        f2 = f(x2);
      }
    }
    best = std::min({best, f1, f2});
  }
  return std::isfinite(best) ? best : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace geotransfer
