#pragma once

#include <cstdint>
#include <vector>

#include "geotransfer/planner.hpp"

namespace geotransfer::detail {

/// A scored coarse candidate; `index` packs (i0, jf, level, branch) in sample order.
struct Candidate {
  double dv;
  std::int64_t index;

  bool operator<(const Candidate& o) const {
    return dv < o.dv || (dv == o.dv && index < o.index);
  }
};

struct RowResult {
  std::vector<Candidate> best;  // sorted, at most n_best
  SearchDiagnostics diagnostics;
};

inline constexpr int kBranchSlots = 4;

/// Scores every candidate whose departure is initial-orbit sample i0.
RowResult coarse_row(const TransferGeometry& geometry, const PlannerConfig& cfg, int i0);

/// Keeps the n smallest of `into` and `from`.
void merge_best(std::vector<Candidate>& into, const std::vector<Candidate>& from, int n);
void accumulate(SearchDiagnostics& into, const SearchDiagnostics& from);

/// Builds full solutions for merged candidates (the same arithmetic as the scan).
CoarseResult finish_coarse(const TransferGeometry& geometry, const PlannerConfig& cfg,
                           const std::vector<Candidate>& best, const SearchDiagnostics& diag);

/// Energy-level coordinate of coarse level k out of n. The ellipse backend spans
/// [0, 1]; heat flow drops w = 0, where the two geodesics merge and the flow stalls.
double level_w(Backend backend, int k, int n);

/// Transfer between two orbit states at energy coordinate w on a branch. Heat-flow
/// results are returned even when not converged (check `residual`). With `finish`
/// the curve is completed (ellipse) and the time of flight reconstructed.
TransferSolution solution_between(const TransferGeometry& geometry, const PlannerConfig& cfg,
                                  const OrbitState& s0, const OrbitState& sf, double w,
                                  int branch, const HeatFlowConfig& flow, bool finish);

bool collinear(const Vec3& p0, const Vec3& pf);

/// Endpoint states of the contour grid axes.
std::vector<OrbitState> grid_states(const OrbitTrack& track, int n);

}  // namespace geotransfer::detail
