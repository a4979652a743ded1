// Sampled-search and contour kernels: an OpenMP version and the serial reference it
// must reproduce bit for bit. Work is split by initial-orbit row; every row result is
// a pure function of its inputs and rows are merged in index order.

#include <algorithm>

#include "geotransfer/errors.hpp"
#include "geotransfer/planner.hpp"
#include "planner_detail.hpp"

namespace geotransfer::detail {

namespace {

void offer(std::vector<Candidate>& best, Candidate c, int n) {
  if (static_cast<int>(best.size()) == n && !(c < best.back())) return;
  best.insert(std::upper_bound(best.begin(), best.end(), c), c);
  if (static_cast<int>(best.size()) > n) best.pop_back();
}

}  // namespace

void merge_best(std::vector<Candidate>& into, const std::vector<Candidate>& from, int n) {
  for (const auto& c : from) offer(into, c, n);
}

void accumulate(SearchDiagnostics& into, const SearchDiagnostics& from) {
  into.pairs += from.pairs;
  into.candidates += from.candidates;
  into.degenerate += from.degenerate;
  into.hill_violations += from.hill_violations;
  into.nonconverged += from.nonconverged;
  into.failed += from.failed;
  into.refine_evaluations += from.refine_evaluations;
}

RowResult coarse_row(const TransferGeometry& geometry, const PlannerConfig& cfg, int i0) {
  const auto& from = geometry.initial().samples();
  const auto& to = geometry.target().samples();
  const GravityModel& model = geometry.problem().model;
  const double mu = model.body.mu;
  const auto nf = static_cast<std::int64_t>(to.size());
  const int ne = cfg.n_energy_samples;
  const OrbitState& s0 = from[i0];

  RowResult out;
  auto& diag = out.diagnostics;
  for (std::int64_t j = 0; j < nf; ++j) {
    const OrbitState& sf = to[j];
    const bool degenerate = collinear(s0.r, sf.r);
    const double amin = a_min(s0.r, sf.r);
    for (int k = 0; k < ne; ++k) {
      ++diag.pairs;
      if (degenerate) {
        ++diag.degenerate;
        continue;
      }
      const std::int64_t base = ((i0 * nf + j) * ne + k) * kBranchSlots;
      const double w = level_w(cfg.backend, k, ne);
      if (cfg.backend == Backend::Ellipse) {
        try {
          const auto transfers =
              solve_transfer_ellipses(mu, s0.r, sf.r, amin * (1.0 + (cfg.multiplier - 1.0) * w));
          for (const auto& t : transfers) {
            ++diag.candidates;
            try {
              offer(out.best, {evaluate_dv(s0, sf, t, mu).total_dv, base + t.branch()}, cfg.n_best);
            } catch (const Error&) {
              ++diag.failed;
            }
          }
        } catch (const Error&) {
          ++diag.failed;
        }
        continue;
      }
      const double e_min = energy_of_sma(mu, amin);
      const JacobiMetric metric(model, e_min * (1.0 + (1.0 / cfg.multiplier - 1.0) * w));
      for (int branch : {0, 1}) {
        ++diag.candidates;
        try {
          const auto g = flow_to_geodesic(metric, s0.r, sf.r,
                                          branch == 0 ? Homotopy::Direct : Homotopy::Reflected,
                                          cfg.coarse_flow);
          if (!g.converged) {
            ++diag.nonconverged;
            continue;
          }
          offer(out.best, {evaluate_dv(s0, sf, g, model).total_dv, base + branch}, cfg.n_best);
        } catch (const HillRegionError&) {
          ++diag.hill_violations;
        } catch (const Error&) {
          ++diag.failed;
        }
      }
    }
  }
  return out;
}

CoarseResult finish_coarse(const TransferGeometry& geometry, const PlannerConfig& cfg,
                           const std::vector<Candidate>& best, const SearchDiagnostics& diag) {
  if (best.empty()) throw EmptyResultError("no feasible transfer among the sampled candidates");
  const auto& from = geometry.initial().samples();
  const auto& to = geometry.target().samples();
  const auto nf = static_cast<std::int64_t>(to.size());
  const int ne = cfg.n_energy_samples;

  CoarseResult out;
  out.diagnostics = diag;
  for (const Candidate& c : best) {
    const int branch = static_cast<int>(c.index % kBranchSlots);
    const std::int64_t pair = c.index / kBranchSlots;
    const int k = static_cast<int>(pair % ne);
    const std::int64_t j = (pair / ne) % nf;
    const std::int64_t i = pair / ne / nf;
    const double w = level_w(cfg.backend, k, ne);
    TransferSolution sol =
        solution_between(geometry, cfg, from[i], to[j], w, branch, cfg.coarse_flow, true);
    sol.x = encode(cfg.backend, {geometry.initial().sample_param(i),
                                 geometry.target().sample_param(j), w, branch});
    sol.provenance = Provenance::Coarse;
    out.best.push_back(std::move(sol));
  }
  return out;
}

std::vector<OrbitState> grid_states(const OrbitTrack& track, int n) {
  std::vector<OrbitState> out(n);
  for (int i = 0; i < n; ++i) out[i] = track.state_at(n == 1 ? 0.0 : static_cast<double>(i) / (n - 1));
  return out;
}

}  // namespace geotransfer::detail

namespace geotransfer {

CoarseResult coarse_search_serial(const TransferGeometry& geometry, const PlannerConfig& cfg) {
  const int rows = static_cast<int>(geometry.initial().samples().size());
  std::vector<detail::Candidate> best;
  SearchDiagnostics diag;
  for (int i = 0; i < rows; ++i) {
    const auto row = detail::coarse_row(geometry, cfg, i);
    detail::merge_best(best, row.best, cfg.n_best);
    detail::accumulate(diag, row.diagnostics);
  }
  return detail::finish_coarse(geometry, cfg, best, diag);
}

CoarseResult coarse_search(const TransferGeometry& geometry, const PlannerConfig& cfg) {
  const int rows = static_cast<int>(geometry.initial().samples().size());
  std::vector<detail::RowResult> results(rows);
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < rows; ++i) results[i] = detail::coarse_row(geometry, cfg, i);

  std::vector<detail::Candidate> best;
  SearchDiagnostics diag;
  for (const auto& row : results) {
    detail::merge_best(best, row.best, cfg.n_best);
    detail::accumulate(diag, row.diagnostics);
  }
  return detail::finish_coarse(geometry, cfg, best, diag);
}

Eigen::MatrixXd contour_grid_serial(const TransferGeometry& geometry, const PlannerConfig& cfg,
                                    int n0, int nf) {
  if (n0 < 2 || nf < 2) throw DomainError("contour grid needs at least 2 x 2 cells");
  if (cfg.backend != Backend::Ellipse) throw DomainError("contour grid needs the ellipse backend");
  const auto rows = detail::grid_states(geometry.initial(), n0);
  const auto cols = detail::grid_states(geometry.target(), nf);
  const double mu = geometry.problem().model.body.mu;
  Eigen::MatrixXd grid(n0, nf);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < nf; ++j) grid(i, j) = best_dv_for_pair(mu, rows[i], cols[j], cfg.multiplier);
  return grid;
}

Eigen::MatrixXd contour_grid(const TransferGeometry& geometry, const PlannerConfig& cfg, int n0,
                             int nf) {
  if (n0 < 2 || nf < 2) throw DomainError("contour grid needs at least 2 x 2 cells");
  if (cfg.backend != Backend::Ellipse) throw DomainError("contour grid needs the ellipse backend");
  const auto rows = detail::grid_states(geometry.initial(), n0);
  const auto cols = detail::grid_states(geometry.target(), nf);
  const double mu = geometry.problem().model.body.mu;
  Eigen::MatrixXd grid(n0, nf);
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < nf; ++j) grid(i, j) = best_dv_for_pair(mu, rows[i], cols[j], cfg.multiplier);
  return grid;
}

}  // namespace geotransfer
