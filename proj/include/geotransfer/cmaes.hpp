#pragma once

#include <functional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace geotransfer {

/// Unit hypercube where some coordinates wrap around (periodic) and the rest clamp.
struct UnitBox {
  std::vector<bool> periodic;

  Eigen::Index dim() const { return static_cast<Eigen::Index>(periodic.size()); }
  Eigen::VectorXd repair(const Eigen::VectorXd& x) const;
};

/// May be called concurrently from several threads; failures should return +inf.
using Objective = std::function<double(const Eigen::VectorXd&)>;

struct CmaesSettings {
  int population = 20;
  int generations = 1000;
  double ftol = 1e-12;     // stop when the generation's fitness spread falls below
  double xtol = 1e-12;     // stop when sigma * max axis falls below
  double sigma0 = 0.05;
};

struct Optimum {
  Eigen::VectorXd x;  // repaired point inside the box
  double f = std::numeric_limits<double>::infinity();
  long evaluations = 0;
  int generations = 0;
};

/// (mu/mu_w, lambda) covariance-matrix-adaptation evolution strategy on the box.
///
/// Out-of-box samples are evaluated at their repair with a quadratic penalty on the
/// clamped distance. Members of a generation are evaluated in parallel; sampling and
/// updates are serial, so the result depends only on the inputs and the rng state.
/// `initial` (optional) is evaluated first and the best member becomes the start mean.
Optimum cmaes_minimize(const Objective& objective, const Eigen::VectorXd& mean0,
                       const UnitBox& box, const CmaesSettings& settings, std::mt19937_64& rng,
                       std::span<const Eigen::VectorXd> initial = {});

struct BasinHoppingSettings {
  double max_step = 0.05;  // uniform perturbation half-width per coordinate
  int patience = 5;        // consecutive non-improving hops before stopping
};

/// Monotonic basin hopping around cmaes_minimize: perturb the incumbent, re-run the
/// local search, accept only strict improvements. x0 itself is scored first.
Optimum basin_hop(const Objective& objective, const Eigen::VectorXd& x0, const UnitBox& box,
                  const CmaesSettings& local, const BasinHoppingSettings& hop,
                  std::mt19937_64& rng);

}  // namespace geotransfer
