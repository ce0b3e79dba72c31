#include "kineticflock/kinetic/alignment.hpp"

#include <cmath>
#include <numbers>

#include "kineticflock/error.hpp"

namespace kflock::kinetic {

namespace {

void require_layout(const SpectralField& f, const Collocation& grid) {
  if (f.K() != grid.K() || f.domain_length() != grid.domain_length()) {
    fail(ErrorKind::Shape, "field and collocation grid disagree on K or domain length");
  }
  if (f.n_modes() < 2) fail(ErrorKind::Shape, "alignment needs Hermite modes 0 and 1");
}

Eigen::VectorXd checked_ratio(const Eigen::VectorXd& num, const Eigen::VectorXd& den, double floor) {
  const Eigen::Index worst = [&] {
    Eigen::Index i = 0;
    den.minCoeff(&i);
    return i;
  }();
  if (!(den[worst] > floor)) {
    fail(ErrorKind::DensityFloor, "local density 1+a = " + std::to_string(den[worst]) +
                                      " at grid node " + std::to_string(worst) + " is below the floor " +
                                      std::to_string(floor));
  }
  return num.cwiseQuotient(den);
}

}  // namespace

double kernel_profile(double x, double beta) { return std::pow(1.0 + x * x, -0.5 * beta); }

double kernel_l1_norm(double beta) {
  if (!(beta > 1.0)) fail(ErrorKind::Config, "kernel is not integrable for beta <= 1");
  return std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (beta - 1.0)) / std::tgamma(0.5 * beta);
}

KernelMultiplier::KernelMultiplier(const AlignmentKernel& kernel, const Collocation& grid) {
  if (!(kernel.beta > 0.0)) fail(ErrorKind::Config, "kernel beta must be positive");
  if (!(kernel.epsilon > 0.0)) fail(ErrorKind::Config, "kernel epsilon must be positive");
  const int m = grid.points();
  const double length = grid.domain_length();
  weights_.resize(m);
  for (int j = 0; j < m; ++j) {
    double d = grid.node(j);
    if (d > 0.5 * length) d -= length;
    weights_[j] = kernel_profile(d / kernel.epsilon, kernel.beta);
  }
  weights_ /= weights_.sum();
  mass_ = weights_.sum();
  if (std::abs(mass_ - 1.0) > 1e-10) {
    fail(ErrorKind::Config, "normalized kernel has discrete mass " + std::to_string(mass_));
  }
  // sum_j w_j e^{-i k x_j} = M * (half spectrum) of w; even in j, so real.
  const Eigen::VectorXcd half = grid.half_spectrum(weights_);
  const int K = grid.K();
  symbol_.resize(2 * K + 1);
  for (int k = 0; k <= K; ++k) {
    symbol_[K + k] = symbol_[K - k] = m * half[k].real();
  }
}

Eigen::VectorXcd KernelMultiplier::convolve(const Eigen::Ref<const Eigen::VectorXcd>& g) const {
  if (g.size() != symbol_.size()) fail(ErrorKind::Shape, "spectral vector length mismatch in convolution");
  return g.cwiseProduct(symbol_.cast<Complex>());
}

Eigen::VectorXd compute_uF(const SpectralField& f, const Collocation& grid, double density_floor) {
  require_layout(f, grid);
  const Eigen::VectorXd a = grid.to_grid(f.coeffs().row(0).transpose());
  const Eigen::VectorXd b = grid.to_grid(f.coeffs().row(1).transpose());
  return checked_ratio(b, (a.array() + 1.0).matrix(), density_floor);
}

Eigen::VectorXd compute_uF_nonlocal(const SpectralField& f, const Collocation& grid,
                                    const KernelMultiplier& kernel, double density_floor) {
  require_layout(f, grid);
  Eigen::VectorXcd density = f.coeffs().row(0).transpose();
  density[f.K()] += 1.0;
  const Eigen::VectorXd num = grid.to_grid(kernel.convolve(f.coeffs().row(1).transpose()));
  const Eigen::VectorXd den = grid.to_grid(kernel.convolve(density));
  return checked_ratio(num, den, density_floor);
}

}  // namespace kflock::kinetic
