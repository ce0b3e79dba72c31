#pragma once

#include <Eigen/Dense>

#include <complex>

namespace kflock::kinetic {

using Complex = std::complex<double>;

/// Perturbation f(x, v, t) on the torus [0, L_x) as Fourier x Hermite
/// coefficients: f = sum_k sum_n c(k, n) exp(2 pi i k x / L_x) psi_n(v).
/// Storage is n_modes rows by (2K + 1) columns, column k + K holding the
/// Hermite vector of wavenumber index k.
///
/// Norms computed from these coefficients are per unit length:
/// sum |c|^2 = (1/L_x) int int |f|^2 dx dv.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(int K, int n_modes, double domain_length, double time = 0.0);

  int K() const noexcept { return K_; }
  int n_modes() const noexcept { return n_modes_; }
  int n_wavenumbers() const noexcept { return 2 * K_ + 1; }
  double domain_length() const noexcept { return length_; }
  double time() const noexcept { return time_; }
  void set_time(double t) noexcept { time_ = t; }

  /// Angular wavenumber 2 pi k / L_x of index k.
  double wavenumber(int k) const noexcept;

  Complex& operator()(int k, int n) { return coeffs_(n, k + K_); }
  const Complex& operator()(int k, int n) const { return coeffs_(n, k + K_); }

  auto mode(int k) { return coeffs_.col(k + K_); }
  auto mode(int k) const { return coeffs_.col(k + K_); }

  Eigen::MatrixXcd& coeffs() noexcept { return coeffs_; }
  const Eigen::MatrixXcd& coeffs() const noexcept { return coeffs_; }

  /// Sets (k, n) and its conjugate partner (-k, n).
  void set_real_mode(int k, int n, Complex value);

  /// Replaces every (k, n), (-k, n) pair by its Hermitian-symmetric part and
  /// makes the k = 0 column real.
  void enforce_reality();
  /// Largest |c(-k, n) - conj(c(k, n))|.
  double reality_defect() const;

  bool same_layout(const SpectralField& other) const noexcept;
  bool all_finite() const;
  double squared_norm() const { return coeffs_.squaredNorm(); }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

 private:
  int K_ = 0;
  int n_modes_ = 0;
  double length_ = 1.0;
  double time_ = 0.0;
  Eigen::MatrixXcd coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Macro pair on the collocation grid: a = <sqrt(M), f>, b = <v sqrt(M), f>.
struct MacroFields {
  Eigen::VectorXd a;
  Eigen::VectorXd b;
  double dx = 0.0;

  double min_density() const { return 1.0 + a.minCoeff(); }
};

}  // namespace kflock::kinetic
