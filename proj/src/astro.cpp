#include "geotransfer/astro.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "geotransfer/errors.hpp"

namespace geotransfer {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double checked_norm(const Vec3& r) {
  const double n = r.norm();
  if (!(n > 0.0)) throw SingularInputError("position at the attracting centre");
  return n;
}

}  // namespace

void BodyConstants::validate() const {
  if (!(mu > 0.0)) throw DomainError("body mu must be > 0");
  if (!(r_body > 0.0)) throw DomainError("body r_body must be > 0");
  if (!(j2 >= 0.0)) throw DomainError("body j2 must be >= 0");
}

void GravityModel::validate() const {
  body.validate();
  if (kind == GravityKind::J2 && !(body.j2 > 0.0))
    throw DomainError("J2 gravity model requires j2 > 0");
}

double potential(const GravityModel& model, const Vec3& r) {
  if (model.kind == GravityKind::ForceFree) return 0.0;
  const double rn = checked_norm(r);
  const double mu = model.body.mu;
  switch (model.kind) {
    case GravityKind::ForceFree:
      return 0.0;
    case GravityKind::Kepler:
      return -mu / rn;
    case GravityKind::J2: {
      const double rr = rn * rn;
      const double ratio = model.body.r_body / rn;
      const double z = r.z();
      return -(mu / rn) * (1.0 - model.body.j2 * ratio * ratio * (3.0 * z * z - rr) / (2.0 * rr));
    }
  }
  return 0.0;
}

Vec3 grad_potential(const GravityModel& model, const Vec3& r) {
  if (model.kind == GravityKind::ForceFree) return Vec3::Zero();
  const double rn = checked_norm(r);
  const double mu = model.body.mu;
  const double inv_r = 1.0 / rn;
  const double inv_r3 = inv_r * inv_r * inv_r;
  Vec3 g = mu * inv_r3 * r;
  if (model.kind == GravityKind::J2) {
    // V_J2 = K (3 z^2 r^-5 - r^-3), K = mu J2 R^2 / 2
    const double k = 0.5 * mu * model.body.j2 * model.body.r_body * model.body.r_body;
    const double z = r.z();
    const double inv_r5 = inv_r3 * inv_r * inv_r;
    const double inv_r7 = inv_r5 * inv_r * inv_r;
    g += k * ((3.0 * inv_r5 - 15.0 * z * z * inv_r7) * r);
    g.z() += k * 6.0 * z * inv_r5;
  }
  return g;
}

Mat3 hess_potential(const GravityModel& model, const Vec3& r) {
  if (model.kind == GravityKind::ForceFree) return Mat3::Zero();
  const double rn = checked_norm(r);
  const double mu = model.body.mu;
  const double inv_r = 1.0 / rn;
  const double inv_r2 = inv_r * inv_r;
  const double inv_r3 = inv_r2 * inv_r;
  const double inv_r5 = inv_r3 * inv_r2;
  const Mat3 rrT = r * r.transpose();
  Mat3 h = mu * (inv_r3 * Mat3::Identity() - 3.0 * inv_r5 * rrT);
  if (model.kind == GravityKind::J2) {
    const double k = 0.5 * mu * model.body.j2 * model.body.r_body * model.body.r_body;
    const double z = r.z();
    const double inv_r7 = inv_r5 * inv_r2;
    const double inv_r9 = inv_r7 * inv_r2;
    const Vec3 ez = Vec3::UnitZ();
    const Mat3 cross_z = ez * r.transpose() + r * ez.transpose();
    h += k * (6.0 * inv_r5 * ez * ez.transpose() - 30.0 * z * inv_r7 * cross_z +
              (105.0 * z * z * inv_r9 - 15.0 * inv_r7) * rrT +
              (3.0 * inv_r5 - 15.0 * z * z * inv_r7) * Mat3::Identity());
  }
  return h;
}

double specific_energy(const GravityModel& model, const OrbitState& state) {
  return 0.5 * state.v.squaredNorm() + potential(model, state.r);
}

OrbitState propagate(const GravityModel& model, const OrbitState& state, double duration,
                     double tol) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 6>;

  if (!std::isfinite(duration)) throw DomainError("propagation duration must be finite");
  if (!(tol > 0.0)) throw DomainError("propagation tolerance must be > 0");
  if (duration == 0.0) return state;

  constexpr double kAbsTol = 1e-9;
  constexpr long kMaxSteps = 10'000'000;

  auto rhs = [&model](const State& x, State& dxdt, double /*t*/) {
    const Vec3 r(x[0], x[1], x[2]);
    const Vec3 a = -grad_potential(model, r);
    dxdt = {x[3], x[4], x[5], a.x(), a.y(), a.z()};
  };

  auto stepper = odeint::make_controlled(kAbsTol, tol, odeint::runge_kutta_fehlberg78<State>());
  State x{state.r.x(), state.r.y(), state.r.z(), state.v.x(), state.v.y(), state.v.z()};

  const double rn = checked_norm(state.r);
  const double speed = std::max(state.v.norm(), 1e-12);
  double dt = std::copysign(std::min(1e-2 * rn / speed, std::abs(duration)), duration);
  double t = 0.0;
  long steps = 0;
  const double dt_floor = 1e-13 * std::max(std::abs(duration), 1.0);

  try {
    while (true) {
      const double remaining = duration - t;
      if (std::abs(remaining) <= 1e-14 * std::abs(duration)) break;
      if (std::abs(dt) > std::abs(remaining)) dt = remaining;
      const auto result = stepper.try_step(rhs, x, t, dt);
      if (result == odeint::fail && std::abs(dt) < dt_floor)
        throw StepFailureError("step size underflow during propagation");
      if (++steps > kMaxSteps) throw StepFailureError("propagation exceeded step budget");
      if (std::hypot(x[0], x[1], x[2]) < 1e-6 * rn)
        throw StepFailureError("trajectory collided with the attracting centre");
    }
  } catch (const SingularInputError&) {
    throw StepFailureError("trajectory reached the attracting centre");
  }
  return {Vec3(x[0], x[1], x[2]), Vec3(x[3], x[4], x[5])};
}

double osculating_period(const GravityModel& model, const OrbitState& state) {
  const double e = specific_energy(model, state);
  if (!(e < 0.0)) throw DomainError("orbit is not elliptic (specific energy >= 0)");
  const double a = -model.body.mu / (2.0 * e);
  return kTwoPi * std::sqrt(a * a * a / model.body.mu);
}

OrbitState kepler_state_at_anomaly(double mu, const Vec3& p_hat, const Vec3& q_hat, double ecc,
                                   double semi_latus, double nu) {
  const double c = std::cos(nu);
  const double s = std::sin(nu);
  const double radius = semi_latus / (1.0 + ecc * c);
  const double vscale = std::sqrt(mu / semi_latus);
  return {radius * (c * p_hat + s * q_hat), vscale * (-s * p_hat + (ecc + c) * q_hat)};
}

OrbitTrack::OrbitTrack(const GravityModel& model, const OrbitState& initial, int n_periods,
                       int n_per_period)
    : model_(model), initial_(initial) {
  if (n_periods < 1 || n_per_period < 2)
    throw DomainError("orbit sampling needs n_periods >= 1 and n_per_period >= 2");
  if (model.kind == GravityKind::ForceFree)
    throw DomainError("cannot sample an orbit in a force-free field");
  const double mu = model.body.mu;
  const double period = osculating_period(model, initial);

  if (model.kind == GravityKind::Kepler) {
    closed_ = true;
    horizon_ = period;
    const Vec3 h = initial.r.cross(initial.v);
    const Vec3 e_vec = initial.v.cross(h) / mu - initial.r.normalized();
    ecc_ = e_vec.norm();
    semi_latus_ = h.squaredNorm() / mu;
    p_hat_ = ecc_ < 1e-12 ? Vec3(initial.r.normalized()) : Vec3(e_vec / ecc_);
    q_hat_ = h.normalized().cross(p_hat_);
    samples_.reserve(n_per_period);
    for (int k = 0; k < n_per_period; ++k)
      samples_.push_back(kepler_state_at_anomaly(mu, p_hat_, q_hat_, ecc_, semi_latus_,
                                                 kTwoPi * k / n_per_period));
    return;
  }

  closed_ = false;
  horizon_ = period * n_periods;
  const int total = n_periods * n_per_period;
  const double dt = period / n_per_period;
  samples_.reserve(total);
  samples_.push_back(initial);
  for (int k = 1; k < total; ++k) samples_.push_back(propagate(model, samples_.back(), dt));
}

double OrbitTrack::sample_param(std::size_t k) const {
  return static_cast<double>(k) / static_cast<double>(samples_.size());
}

OrbitState OrbitTrack::state_at(double u) const {
  if (closed_) {
    double frac = u - std::floor(u);
    if (frac >= 1.0) frac = 0.0;
    return kepler_state_at_anomaly(model_.body.mu, p_hat_, q_hat_, ecc_, semi_latus_,
                                   kTwoPi * frac);
  }
  const double clamped = std::clamp(u, 0.0, 1.0);
  const double n = static_cast<double>(samples_.size());
  const double dt = horizon_ / n;
  const double t = clamped * horizon_;
  const auto k = static_cast<std::size_t>(
      std::clamp(std::floor(clamped * n), 0.0, n - 1.0));
  const double offset = t - static_cast<double>(k) * dt;
  if (offset == 0.0) return samples_[k];
  return propagate(model_, samples_[k], offset);
}

std::vector<OrbitState> sample_orbit(const GravityModel& model, const OrbitState& state,
                                     int n_periods, int n_per_period) {
  return OrbitTrack(model, state, n_periods, n_per_period).samples();
}

}  // namespace geotransfer
