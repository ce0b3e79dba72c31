#include "kineticflock/kinetic/solver.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "kineticflock/error.hpp"

namespace kflock::kinetic {

namespace {

constexpr Complex kI{0.0, 1.0};

}  // namespace

void validate(const SolverConfig& c) {
  if (c.K < 0) fail(ErrorKind::Config, "K must be >= 0");
  if (c.n_modes < 4) fail(ErrorKind::Config, "n_modes must be >= 4");
  if (!(c.domain_length > 0.0)) fail(ErrorKind::Config, "domain_length must be positive");
  if (!(c.dt > 0.0)) fail(ErrorKind::Config, "dt must be positive");
  if (!(c.t_end >= 0.0)) fail(ErrorKind::Config, "t_end must be >= 0");
  if (c.sobolev_order < 1) fail(ErrorKind::Config, "sobolev_order must be >= 1");
  if (c.report_interval < 0.0 || c.snapshot_interval < 0.0) {
    fail(ErrorKind::Config, "output intervals must be >= 0");
  }
  if (!(c.density_floor > 0.0)) fail(ErrorKind::Config, "density_floor must be positive");
  if (!(c.cfl > 0.0) || !(c.damping_number > 0.0)) {
    fail(ErrorKind::Config, "stability constants must be positive");
  }
  if (c.weights.nu1 < 1.0 || c.weights.nu2 < 1.0) fail(ErrorKind::Config, "nu1 and nu2 must be >= 1");
  for (double w : c.weights.C) {
    if (!(w > 0.0)) fail(ErrorKind::Config, "energy weights C^l must be positive");
  }
  if (c.threads < 1) fail(ErrorKind::Config, "threads must be >= 1");
}

StabilityLimits stability_limits(const SolverConfig& c) {
  StabilityLimits lim;
  const double inf = std::numeric_limits<double>::infinity();
  if (c.K == 0) {
    lim.dt_advection = lim.dt_damping = inf;
    return lim;
  }
  const double dx = c.domain_length / (2.0 * c.K);
  const double v_max = std::sqrt(2.0 * c.n_modes);
  const double k_max = 2.0 * std::numbers::pi * c.K / c.domain_length;
  lim.dt_advection = c.cfl * dx / v_max;
  lim.dt_damping = c.damping_number / (k_max * k_max);
  return lim;
}

Solver::Solver(const SolverConfig& config) : config_(config), grid_(config.K, config.domain_length) {
  validate(config_);
  if (config_.kernel.mode == AlignmentMode::Nonlocal) kernel_.emplace(config_.kernel, grid_);
}

SpectralField Solver::make_field() const {
  return SpectralField(config_.K, config_.n_modes, config_.domain_length);
}

Eigen::VectorXd Solver::alignment_velocity(const SpectralField& f) const {
  if (kernel_) return compute_uF_nonlocal(f, grid_, *kernel_, config_.density_floor);
  return compute_uF(f, grid_, config_.density_floor);
}

SpectralField Solver::explicit_part(const SpectralField& f) const {
  if (f.K() != config_.K || f.n_modes() != config_.n_modes) {
    fail(ErrorKind::Shape, "field layout does not match the solver configuration");
  }
  const int N = f.n_modes();
  const int K = f.K();
  const Eigen::MatrixXcd& c = f.coeffs();
  SpectralField out(K, N, f.domain_length(), f.time());
  Eigen::MatrixXcd& o = out.coeffs();

  for (int k = -K; k <= K; ++k) {
    const Complex ik = kI * f.wavenumber(k);
    const int col = k + K;
    for (int n = 0; n < N; ++n) {
      Complex vf = 0.0;
      if (n > 0) vf += std::sqrt(static_cast<double>(n)) * c(n - 1, col);
      if (n + 1 < N) vf += std::sqrt(static_cast<double>(n + 1)) * c(n + 1, col);
      o(n, col) = -ik * vf;
    }
  }

  // u (v/2 - d_v) f + u v sqrt(M): mode n receives sqrt(n) [u (f + sqrt(M))]_{n-1}.
  Eigen::MatrixXd g = grid_.rows_to_grid(c.topRows(N - 1), config_.threads);
  const Eigen::VectorXd u = kernel_ ? alignment_velocity(f) : [&] {
    const Eigen::VectorXd density = (g.row(0).array() + 1.0).matrix().transpose();
    const Eigen::Index m = density.size();
    Eigen::Index worst = 0;
    density.minCoeff(&worst);
    if (!(density[worst] > config_.density_floor)) {
      fail(ErrorKind::DensityFloor, "local density 1+a = " + std::to_string(density[worst]) +
                                        " at grid node " + std::to_string(worst) + " of " + std::to_string(m) +
                                        " is below the floor");
    }
    return Eigen::VectorXd(g.row(1).transpose().cwiseQuotient(density));
  }();
  g.row(0).array() += 1.0;
  g.array().rowwise() *= u.transpose().array();
  const Eigen::MatrixXcd q = grid_.rows_from_grid(g, config_.threads);
  for (int n = 1; n < N; ++n) o.row(n) += std::sqrt(static_cast<double>(n)) * q.row(n - 1);
  return out;
}

SpectralField Solver::rhs(const SpectralField& f) const {
  SpectralField out = explicit_part(f);
  for (int n = 1; n < f.n_modes(); ++n) out.coeffs().row(n) -= static_cast<double>(n) * f.coeffs().row(n);
  return out;
}

void Solver::check_stability(double dt) const {
  if (!(dt > 0.0)) fail(ErrorKind::CflViolation, "dt must be positive");
  const StabilityLimits lim = stability_limits(config_);
  if (dt > lim.dt_advection) {
    fail(ErrorKind::CflViolation, "dt = " + std::to_string(dt) + " exceeds the advection limit " +
                                      std::to_string(lim.dt_advection) + " (cfl * dx / sqrt(2 N_v))");
  }
  if (dt > lim.dt_damping) {
    fail(ErrorKind::CflViolation, "dt = " + std::to_string(dt) + " exceeds the transport/damping limit " +
                                      std::to_string(lim.dt_damping) + " (damping_number / kmax^2)");
  }
}

void Solver::apply_implicit(SpectralField& f, double factor) const {
  for (int n = 1; n < f.n_modes(); ++n) f.coeffs().row(n) /= 1.0 + factor * static_cast<double>(n);
}

SpectralField Solver::step(const SpectralField& f, double dt) const {
  check_stability(dt);
  SpectralField next(f.K(), f.n_modes(), f.domain_length());
  if (config_.scheme == TimeScheme::ImexEuler) {
    next = f;
    next.coeffs() += dt * explicit_part(f).coeffs();
    apply_implicit(next, dt);
  } else {
    // ARS(2,2,2): stiffly accurate, L-stable implicit part.
    const double gamma = 1.0 - 1.0 / std::sqrt(2.0);
    const double delta = 1.0 - 1.0 / (2.0 * gamma);
    const SpectralField e0 = explicit_part(f);
    SpectralField y1 = f;
    y1.coeffs() += (dt * gamma) * e0.coeffs();
    apply_implicit(y1, gamma * dt);
    const SpectralField e1 = explicit_part(y1);
    next = f;
    next.coeffs() += (dt * delta) * e0.coeffs() + (dt * (1.0 - delta)) * e1.coeffs();
    for (int n = 1; n < f.n_modes(); ++n) {
      next.coeffs().row(n) -= (dt * (1.0 - gamma) * n) * y1.coeffs().row(n);
    }
    apply_implicit(next, gamma * dt);
  }
  next.set_time(f.time() + dt);
  if (!next.all_finite()) {
    fail(ErrorKind::NonFinite, "non-finite coefficient after step to t = " + std::to_string(next.time()));
  }
  return next;
}

double Solver::closure_flux(const SpectralField& f) const {
  const int N = f.n_modes();
  const double root = std::sqrt(static_cast<double>(N));
  double total = 0.0;
  for (int k = -f.K(); k <= f.K(); ++k) {
    total += std::norm(root * f.wavenumber(k) * f(k, N - 1));
  }
  return std::sqrt(total);
}

SpectralField rhs(const Solver& solver, const SpectralField& f) { return solver.rhs(f); }

SpectralField step_imex(const Solver& solver, const SpectralField& f, double dt) {
  return solver.step(f, dt);
}

}  // namespace kflock::kinetic
