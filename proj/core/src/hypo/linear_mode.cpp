#include "kineticflock/hypo/linear_mode.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "kineticflock/error.hpp"
#include "kineticflock/hypo/ode.hpp"

namespace kflock::hypo {

LinearModeSystem::LinearModeSystem(double k, int n_modes, double kappa) : k_(k), n_modes_(n_modes), kappa_(kappa) {
  if (n_modes < 8) fail(ErrorKind::Config, "linear mode system needs n_modes >= 8");
  if (!(kappa >= 0.0)) fail(ErrorKind::Config, "kappa must be >= 0");
  const Complex ik(0.0, k);
  generator_ = Eigen::MatrixXcd::Zero(n_modes, n_modes);
  for (int n = 0; n < n_modes; ++n) {
    generator_(n, n) = -static_cast<double>(n);
    if (n + 1 < n_modes) {
      const double s = std::sqrt(static_cast<double>(n + 1));
      generator_(n + 1, n) = -ik * s;
      generator_(n, n + 1) = -ik * s;
    }
  }
  generator_(1, 1) += 1.0;  // P1

  // E(f) = sum conj(f_i) M_ij f_j; only (1,2) and (0,1) entries are nonzero.
  const Complex w = ik / (1.0 + k * k);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n_modes, n_modes);
  m(1, 2) = 1.5 * std::sqrt(2.0) * w;
  m(0, 1) = -w;
  cross_ = 0.5 * (m + m.adjoint());
  cross_norm_ = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(cross_, Eigen::EigenvaluesOnly)
                    .eigenvalues()
                    .cwiseAbs()
                    .maxCoeff();
  if (kappa_ * cross_norm_ > 0.5) {
    fail(ErrorKind::KappaTooLarge, "kappa = " + std::to_string(kappa_) + " times |Re E| norm " +
                                       std::to_string(cross_norm_) + " exceeds 1/2 at k = " + std::to_string(k));
  }
}

Eigen::VectorXcd LinearModeSystem::eigenvalues() const {
  return Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(generator_, false).eigenvalues();
}

double LinearModeSystem::spectral_abscissa() const { return eigenvalues().real().maxCoeff(); }

Eigen::VectorXcd LinearModeSystem::slowest_eigenvector(Complex* eigenvalue) const {
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(generator_, true);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < eig.eigenvalues().size(); ++i) {
    const Complex li = eig.eigenvalues()[i], lb = eig.eigenvalues()[best];
    const double gap = li.real() - lb.real();
    if (gap > 1e-12 || (std::abs(gap) <= 1e-12 && li.imag() > lb.imag())) best = i;
  }
  if (eigenvalue) *eigenvalue = eig.eigenvalues()[best];
  Eigen::VectorXcd v = eig.eigenvectors().col(best);
  return v / v.norm();
}

Complex LinearModeSystem::cross_functional(const Eigen::Ref<const Eigen::VectorXcd>& f) const {
  if (f.size() != n_modes_) fail(ErrorKind::Shape, "coefficient vector length does not match the generator");
  const Complex w(0.0, k_ / (1.0 + k_ * k_));
  const Complex A = std::sqrt(2.0) * f[2];
  return 1.5 * w * A * std::conj(f[1]) - w * f[1] * std::conj(f[0]);
}

LinearModeSystem build_generator(double k, int n_modes, double kappa) { return LinearModeSystem(k, n_modes, kappa); }

double lyapunov_Etilde(const LinearModeSystem& system, const Eigen::Ref<const Eigen::VectorXcd>& f) {
  return f.squaredNorm() + system.kappa() * system.cross_functional(f).real();
}

LyapunovState lyapunov_state(const LinearModeSystem& system, const Eigen::Ref<const Eigen::VectorXcd>& f) {
  LyapunovState s;
  s.f = f;
  s.a = f[0];
  s.b = f[1];
  s.E_cross = system.cross_functional(f);
  s.E_tilde = f.squaredNorm() + system.kappa() * s.E_cross.real();
  return s;
}

Eigen::VectorXcd evolve_mode(const LinearModeSystem& system, const Eigen::Ref<const Eigen::VectorXcd>& f0, double t,
                             EvolveMethod method) {
  if (f0.size() != system.n_modes()) fail(ErrorKind::Shape, "initial vector length does not match the generator");
  if (!(t >= 0.0) || !std::isfinite(t)) fail(ErrorKind::Config, "evolution time must be finite and >= 0");
  if (t == 0.0) return f0;
  Eigen::VectorXcd out;
  if (method == EvolveMethod::Expm) {
    const Eigen::MatrixXcd step = (t * system.generator()).exp();
    out = step * f0;
  } else {
    const Eigen::MatrixXcd& g = system.generator();
    OdeOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-14 * std::max(1.0, f0.norm());
    out = integrate_dopri5([&](double, const Eigen::VectorXcd& y) { return Eigen::VectorXcd(g * y); }, f0, 0.0, t, opt);
  }
  if (!out.allFinite()) fail(ErrorKind::NonFinite, "mode evolution produced non-finite values");
  return out;
}

std::vector<Eigen::VectorXcd> evolve_series(const LinearModeSystem& system,
                                            const Eigen::Ref<const Eigen::VectorXcd>& f0,
                                            const std::vector<double>& t_grid, EvolveMethod method) {
  std::vector<Eigen::VectorXcd> out;
  out.reserve(t_grid.size());
  Eigen::VectorXcd current = f0;
  double t = 0.0;
  for (double target : t_grid) {
    if (target < t) fail(ErrorKind::Config, "time grid must be nondecreasing and start at t >= 0");
    current = evolve_mode(system, current, target - t, method);
    t = target;
    out.push_back(current);
  }
  return out;
}

ModeDecayResult verify_mode_decay(const std::vector<double>& k_list, const Eigen::VectorXcd& f0,
                                  const std::vector<double>& t_grid, double kappa, double tail_start) {
  if (k_list.empty()) fail(ErrorKind::Config, "k list is empty");
  ModeDecayResult result;
  result.c = std::numeric_limits<double>::infinity();
  for (double k : k_list) {
    if (k == 0.0) fail(ErrorKind::Config, "mode decay needs k != 0");
    const LinearModeSystem system(k, static_cast<int>(f0.size()), kappa);
    const double tau = (1.0 + k * k) / (k * k);
    std::vector<double> times;
    times.reserve(t_grid.size());
    for (double s : t_grid) times.push_back(s * tau);
    const std::vector<Eigen::VectorXcd> states = evolve_series(system, f0, times);

    std::vector<double> tail_t, tail_e;
    bool monotone = true;
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < states.size(); ++i) {
      const double e = lyapunov_Etilde(system, states[i]);
      if (t_grid[i] >= tail_start) {
        tail_t.push_back(times[i]);
        tail_e.push_back(e);
        monotone = monotone && e <= previous;
        previous = e;
      }
    }
    const diag::DecayFit fit = diag::fit_decay(tail_t, tail_e, diag::DecayModel::Exponential);
    ModeDecay mode;
    mode.k = k;
    mode.rate = fit.rate;
    mode.r_squared = fit.r_squared;
    mode.eigen_rate = -2.0 * system.spectral_abscissa();
    mode.eventually_monotone = monotone;
    result.modes.push_back(mode);
    result.c = std::min(result.c, fit.rate * (1.0 + k * k) / (k * k));
  }
  std::vector<ModeDecay> sorted = result.modes;
  std::sort(sorted.begin(), sorted.end(), [](const ModeDecay& a, const ModeDecay& b) { return std::abs(a.k) < std::abs(b.k); });
  if (sorted.size() >= 2 && sorted[0].rate > 0.0 && sorted[1].rate > 0.0) {
    result.small_k_slope = std::log(sorted[1].rate / sorted[0].rate) / std::log(std::abs(sorted[1].k / sorted[0].k));
  }
  return result;
}

}  // namespace kflock::hypo
