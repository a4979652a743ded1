#include "geotransfer/cmaes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "geotransfer/errors.hpp"

namespace geotransfer {

Eigen::VectorXd UnitBox::repair(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = x;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (periodic[i]) {
      y(i) -= std::floor(y(i));
      if (y(i) >= 1.0) y(i) = 0.0;
    } else {
      y(i) = std::clamp(y(i), 0.0, 1.0);
    }
  }
  return y;
}

namespace {

constexpr double kPenalty = 1e3;

// Evaluates each column; entries are filled independently so the loop can be split.
void evaluate_all(const Objective& objective, const UnitBox& box, const Eigen::MatrixXd& xs,
                  std::vector<double>& f, std::vector<Eigen::VectorXd>& repaired) {
  const auto lambda = static_cast<int>(xs.cols());
  f.assign(lambda, 0.0);
  repaired.assign(lambda, Eigen::VectorXd());
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < lambda; ++k) {
    const Eigen::VectorXd x = xs.col(k);
    repaired[k] = box.repair(x);
    double fit = objective(repaired[k]);
    if (!std::isfinite(fit)) fit = std::numeric_limits<double>::infinity();
    double outside = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (!box.periodic[i]) outside += (x(i) - repaired[k](i)) * (x(i) - repaired[k](i));
    f[k] = fit + kPenalty * outside;
  }
}

}  // namespace

Optimum cmaes_minimize(const Objective& objective, const Eigen::VectorXd& mean0,
                       const UnitBox& box, const CmaesSettings& settings, std::mt19937_64& rng,
                       std::span<const Eigen::VectorXd> initial) {
  const Eigen::Index n = box.dim();
  if (mean0.size() != n) throw DomainError("CMA-ES start point has the wrong dimension");
  if (settings.population < 2) throw DomainError("CMA-ES population must be >= 2");
  const int lambda = settings.population;
  const int mu = lambda / 2;
  const double dn = static_cast<double>(n);

  Eigen::VectorXd weights(mu);
  for (int i = 0; i < mu; ++i) weights(i) = std::log(mu + 0.5) - std::log(i + 1.0);
  weights /= weights.sum();
  const double mueff = 1.0 / weights.squaredNorm();

  const double cc = (4.0 + mueff / dn) / (dn + 4.0 + 2.0 * mueff / dn);
  const double cs = (mueff + 2.0) / (dn + mueff + 5.0);
  const double c1 = 2.0 / ((dn + 1.3) * (dn + 1.3) + mueff);
  const double cmu =
      std::min(1.0 - c1, 2.0 * (mueff - 2.0 + 1.0 / mueff) / ((dn + 2.0) * (dn + 2.0) + mueff));
  const double damps = 1.0 + 2.0 * std::max(0.0, std::sqrt((mueff - 1.0) / (dn + 1.0)) - 1.0) + cs;
  const double chin = std::sqrt(dn) * (1.0 - 1.0 / (4.0 * dn) + 1.0 / (21.0 * dn * dn));

  Optimum best;
  best.x = box.repair(mean0);
  Eigen::VectorXd mean = mean0;

  if (!initial.empty()) {
    Eigen::MatrixXd xs(n, static_cast<Eigen::Index>(initial.size()));
    for (std::size_t k = 0; k < initial.size(); ++k) xs.col(static_cast<Eigen::Index>(k)) = initial[k];
    std::vector<double> f;
    std::vector<Eigen::VectorXd> rep;
    evaluate_all(objective, box, xs, f, rep);
    best.evaluations += static_cast<long>(f.size());
    const auto k = std::distance(f.begin(), std::min_element(f.begin(), f.end()));
    best.x = rep[k];
    best.f = f[k];
    mean = xs.col(k);
  }

  double sigma = settings.sigma0;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd axes = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd pc = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd ps = Eigen::VectorXd::Zero(n);
  std::normal_distribution<double> normal(0.0, 1.0);

  Eigen::MatrixXd z(n, lambda);
  Eigen::MatrixXd xs(n, lambda);
  std::vector<double> f;
  std::vector<Eigen::VectorXd> rep;
  std::vector<int> order(lambda);

  for (int gen = 0; gen < settings.generations; ++gen) {
    for (int k = 0; k < lambda; ++k)
      for (Eigen::Index i = 0; i < n; ++i) z(i, k) = normal(rng);
    const Eigen::MatrixXd y = basis * axes.asDiagonal() * z;
    for (int k = 0; k < lambda; ++k) xs.col(k) = mean + sigma * y.col(k);

    evaluate_all(objective, box, xs, f, rep);
    best.evaluations += lambda;
    best.generations = gen + 1;

    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return f[a] < f[b]; });
    if (f[order[0]] < best.f) {
      best.f = f[order[0]];
      best.x = rep[order[0]];
    }

    const Eigen::VectorXd old_mean = mean;
    mean.setZero();
    for (int i = 0; i < mu; ++i) mean += weights(i) * xs.col(order[i]);
    const Eigen::VectorXd step = (mean - old_mean) / sigma;

    const Eigen::VectorXd whitened = basis * axes.cwiseInverse().asDiagonal() * basis.transpose() * step;
    ps = (1.0 - cs) * ps + std::sqrt(cs * (2.0 - cs) * mueff) * whitened;
    const double ps_norm = ps.norm();
    const bool hsig = ps_norm / std::sqrt(1.0 - std::pow(1.0 - cs, 2.0 * (gen + 1))) / chin <
                      1.4 + 2.0 / (dn + 1.0);
    pc = (1.0 - cc) * pc + (hsig ? std::sqrt(cc * (2.0 - cc) * mueff) : 0.0) * step;

    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < mu; ++i) {
      const Eigen::VectorXd d = (xs.col(order[i]) - old_mean) / sigma;
      rank_mu += weights(i) * d * d.transpose();
    }
    cov = (1.0 - c1 - cmu) * cov +
          c1 * (pc * pc.transpose() + (hsig ? 0.0 : cc * (2.0 - cc)) * cov) + cmu * rank_mu;
    sigma *= std::exp((cs / damps) * (ps_norm / chin - 1.0));

    cov = 0.5 * (cov + cov.transpose());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    basis = eig.eigenvectors();
    axes = eig.eigenvalues().cwiseMax(1e-300).cwiseSqrt();

    const double spread = f[order[lambda - 1]] - f[order[0]];
    if (std::isfinite(spread) && spread < settings.ftol) break;
    if (sigma * axes.maxCoeff() < settings.xtol) break;
  }
  return best;
}

Optimum basin_hop(const Objective& objective, const Eigen::VectorXd& x0, const UnitBox& box,
                  const CmaesSettings& local, const BasinHoppingSettings& hop,
                  std::mt19937_64& rng) {
  const Eigen::VectorXd start0 = x0;
  Optimum best = cmaes_minimize(objective, x0, box, local, rng, std::span(&start0, 1));
  std::uniform_real_distribution<double> jitter(-hop.max_step, hop.max_step);
  int failures = 0;
  long evaluations = best.evaluations;
  while (failures < hop.patience) {
    Eigen::VectorXd start = best.x;
    for (Eigen::Index i = 0; i < start.size(); ++i) start(i) += jitter(rng);
    start = box.repair(start);
    const Optimum trial = cmaes_minimize(objective, start, box, local, rng);
    evaluations += trial.evaluations;
    if (trial.f < best.f) {
      best = trial;
      failures = 0;
    } else {
      ++failures;
    }
  }
  best.evaluations = evaluations;
  return best;
}

}  // namespace geotransfer
