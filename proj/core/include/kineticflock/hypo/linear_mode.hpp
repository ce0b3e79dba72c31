#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "kineticflock/diagnostics/decay_fit.hpp"

namespace kflock::hypo {

using Complex = std::complex<double>;

/// Truncated generator of the linearized problem at one real wavenumber k:
///   G(k) = -i k V + L + P1,
/// V the mult_v matrix and P1 the rank-one injection of b v sqrt(M).
class LinearModeSystem {
 public:
  LinearModeSystem(double k, int n_modes, double kappa = 0.05);

  double k() const noexcept { return k_; }
  int n_modes() const noexcept { return n_modes_; }
  double kappa() const noexcept { return kappa_; }
  const Eigen::MatrixXcd& generator() const noexcept { return generator_; }

  Eigen::VectorXcd eigenvalues() const;
  /// Largest real part among the eigenvalues.
  double spectral_abscissa() const;
  /// Eigenvector of the eigenvalue with the largest real part (ties broken
  /// towards nonnegative imaginary part), unit norm.
  Eigen::VectorXcd slowest_eigenvector(Complex* eigenvalue = nullptr) const;

  /// Cross functional
  ///   E(f) = 3/2 (ik/(1+k^2)) A11({I-P}f) conj(b) - (ik/(1+k^2)) b conj(a).
  Complex cross_functional(const Eigen::Ref<const Eigen::VectorXcd>& f) const;
  /// Hermitian H with Re E(f) = f^* H f.
  const Eigen::MatrixXcd& cross_matrix() const noexcept { return cross_; }
  /// Spectral norm of H; kappa * |H| <= 1/2 is checked at construction.
  double cross_norm() const noexcept { return cross_norm_; }

 private:
  double k_;
  int n_modes_;
  double kappa_;
  Eigen::MatrixXcd generator_;
  Eigen::MatrixXcd cross_;
  double cross_norm_ = 0.0;
};

LinearModeSystem build_generator(double k, int n_modes, double kappa = 0.05);

/// Etilde(f) = |f|^2 + kappa Re E(f).
double lyapunov_Etilde(const LinearModeSystem& system, const Eigen::Ref<const Eigen::VectorXcd>& f);

struct LyapunovState {
  Eigen::VectorXcd f;
  Complex a;
  Complex b;
  Complex E_cross;
  double E_tilde;
};

LyapunovState lyapunov_state(const LinearModeSystem& system, const Eigen::Ref<const Eigen::VectorXcd>& f);

enum class EvolveMethod { Expm, Ode };

/// exp(t G) f0.
Eigen::VectorXcd evolve_mode(const LinearModeSystem& system, const Eigen::Ref<const Eigen::VectorXcd>& f0,
                             double t, EvolveMethod method = EvolveMethod::Expm);

/// exp(t_i G) f0 along an increasing grid starting at t_0 >= 0, propagating
/// step to step.
std::vector<Eigen::VectorXcd> evolve_series(const LinearModeSystem& system,
                                            const Eigen::Ref<const Eigen::VectorXcd>& f0,
                                            const std::vector<double>& t_grid,
                                            EvolveMethod method = EvolveMethod::Expm);

struct ModeDecay {
  double k = 0.0;
  double rate = 0.0;
  double r_squared = 0.0;
  /// -2 * spectral abscissa: the asymptotic rate of |f|^2.
  double eigen_rate = 0.0;
  bool eventually_monotone = false;
};

struct ModeDecayResult {
  std::vector<ModeDecay> modes;
  /// Largest c with rate(k) >= c k^2/(1+k^2) over the list.
  double c = 0.0;
  /// log-log slope of rate(k) over the two smallest |k|.
  double small_k_slope = 0.0;
};

/// Fits exponential rates of Etilde(t) per k. `t_grid` is in units of the
/// hypocoercive time (1+k^2)/k^2, so one grid serves every k; the fit uses
/// the samples with t >= tail_start (same units).
ModeDecayResult verify_mode_decay(const std::vector<double>& k_list, const Eigen::VectorXcd& f0,
                                  const std::vector<double>& t_grid, double kappa = 0.05,
                                  double tail_start = 5.0);

}  // namespace kflock::hypo
