#include "kineticflock/kinetic/spectral_field.hpp"

#include <cmath>
#include <numbers>

#include "kineticflock/error.hpp"

namespace kflock::kinetic {

SpectralField::SpectralField(int K, int n_modes, double domain_length, double time)
    : K_(K), n_modes_(n_modes), length_(domain_length), time_(time) {
  if (K < 0) fail(ErrorKind::Config, "spatial mode count K must be >= 0");
  if (n_modes < 1) fail(ErrorKind::Config, "n_modes must be >= 1");
  if (!(domain_length > 0.0)) fail(ErrorKind::Config, "domain length must be positive");
  coeffs_ = Eigen::MatrixXcd::Zero(n_modes, 2 * K + 1);
}

double SpectralField::wavenumber(int k) const noexcept {
  return 2.0 * std::numbers::pi * static_cast<double>(k) / length_;
}

void SpectralField::set_real_mode(int k, int n, Complex value) {
  if (k == 0) {
    (*this)(0, n) = Complex(value.real(), 0.0);
    return;
  }
  (*this)(k, n) = value;
  (*this)(-k, n) = std::conj(value);
}

void SpectralField::enforce_reality() {
  for (int n = 0; n < n_modes_; ++n) {
    (*this)(0, n) = Complex((*this)(0, n).real(), 0.0);
    for (int k = 1; k <= K_; ++k) {
      const Complex sym = 0.5 * ((*this)(k, n) + std::conj((*this)(-k, n)));
      (*this)(k, n) = sym;
      (*this)(-k, n) = std::conj(sym);
    }
  }
}

double SpectralField::reality_defect() const {
  double worst = 0.0;
  for (int n = 0; n < n_modes_; ++n) {
    for (int k = 0; k <= K_; ++k) {
      worst = std::max(worst, std::abs((*this)(-k, n) - std::conj((*this)(k, n))));
    }
  }
  return worst;
}

bool SpectralField::same_layout(const SpectralField& other) const noexcept {
  return K_ == other.K_ && n_modes_ == other.n_modes_ && length_ == other.length_;
}

bool SpectralField::all_finite() const { return coeffs_.allFinite(); }

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (!same_layout(other)) fail(ErrorKind::Shape, "field layouts differ");
  coeffs_ += other.coeffs_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  if (!same_layout(other)) fail(ErrorKind::Shape, "field layouts differ");
  coeffs_ -= other.coeffs_;
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

}  // namespace kflock::kinetic
