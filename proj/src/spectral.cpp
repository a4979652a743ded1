#include "geotransfer/spectral.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include <Eigen/LU>

#include "geotransfer/errors.hpp"

namespace geotransfer::spectral {

std::vector<double> lobatto_params(int n) {
  if (n < 2) throw DomainError("Chebyshev-Lobatto grid needs at least 2 nodes");
  std::vector<double> s(n);
  const int m = n - 1;
  for (int k = 0; k <= m; ++k) {
    // sin form keeps symmetric pairs mirrored about 1/2
    s[k] = 0.5 * (1.0 + std::sin(std::numbers::pi * (2 * k - m) / (2.0 * m)));
  }
  s.front() = 0.0;
  s.back() = 1.0;
  return s;
}

Collocation Collocation::from_params(std::span<const double> params) {
  const auto n = static_cast<Eigen::Index>(params.size());
  if (n < 2) throw DomainError("collocation needs at least 2 nodes");
  for (Eigen::Index i = 1; i < n; ++i)
    if (!(params[i] > params[i - 1])) throw DomainError("node parameters must increase strictly");

  Collocation c;
  c.params.assign(params.begin(), params.end());

  // Barycentric weights with capacity scaling (interval length 1 -> factor 4).
  c.bary.assign(n, 1.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    double w = 1.0;
    for (Eigen::Index k = 0; k < n; ++k)
      if (k != j) w *= 4.0 * (params[j] - params[k]);
    c.bary[j] = 1.0 / w;
  }
  double wmax = 0.0;
  for (double w : c.bary) wmax = std::max(wmax, std::abs(w));
  for (double& w : c.bary) w /= wmax;

  c.d1 = Eigen::MatrixXd::Zero(n, n);
  c.d2 = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      c.d1(i, j) = (c.bary[j] / c.bary[i]) / (params[i] - params[j]);
    }
    double diag = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) diag -= c.d1(i, j);
    c.d1(i, i) = diag;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    double diag = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      c.d2(i, j) = 2.0 * c.d1(i, j) * (c.d1(i, i) - 1.0 / (params[i] - params[j]));
      diag -= c.d2(i, j);
    }
    c.d2(i, i) = diag;
  }

  // Quadrature and cumulative integration through the Chebyshev basis in x = 2s - 1.
  Eigen::MatrixXd vander(n, n);
  Eigen::MatrixXd antider(n, n);  // int_0^{s_i} T_k(2s - 1) ds
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = 2.0 * params[i] - 1.0;
    std::vector<double> t(n + 1);
    t[0] = 1.0;
    t[1] = x;
    for (Eigen::Index k = 2; k <= n; ++k) t[k] = 2.0 * x * t[k - 1] - t[k - 2];
    for (Eigen::Index k = 0; k < n; ++k) vander(i, k) = t[k];
    for (Eigen::Index k = 0; k < n; ++k) {
      double integral;  // over x from -1
      if (k == 0) {
        integral = x + 1.0;
      } else if (k == 1) {
        integral = 0.5 * (x * x - 1.0);
      } else {
        const double sign_up = (k + 1) % 2 == 0 ? 1.0 : -1.0;
        const double sign_dn = (k - 1) % 2 == 0 ? 1.0 : -1.0;
        integral = 0.5 * ((t[k + 1] - sign_up) / (k + 1.0) - (t[k - 1] - sign_dn) / (k - 1.0));
      }
      antider(i, k) = 0.5 * integral;
    }
  }
  Eigen::VectorXd moments(n);
  for (Eigen::Index k = 0; k < n; ++k)
    moments(k) = (k % 2 == 1) ? 0.0 : 1.0 / (1.0 - static_cast<double>(k * k));
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(vander);
  c.quad = lu.transpose().solve(moments);
  c.cumulative = antider * lu.inverse();
  return c;
}

Eigen::VectorXd Collocation::interpolation_row(double s) const {
  const auto n = static_cast<Eigen::Index>(params.size());
  Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (s == params[j]) {
      row(j) = 1.0;
      return row;
    }
  }
  double denom = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    row(j) = bary[j] / (s - params[j]);
    denom += row(j);
  }
  return row / denom;
}

const Collocation& lobatto(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Collocation>> cache;
  const std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    const auto params = lobatto_params(n);
    slot = std::make_unique<Collocation>(Collocation::from_params(params));
  }
  return *slot;
}

Collocation for_params(std::span<const double> params) {
  const auto n = static_cast<int>(params.size());
  if (n >= 2) {
    const auto& ref = lobatto(n);
    bool same = true;
    for (int i = 0; i < n && same; ++i) same = std::abs(ref.params[i] - params[i]) <= 1e-14;
    if (same) return ref;
  }
  return Collocation::from_params(params);
}

}  // namespace geotransfer::spectral
