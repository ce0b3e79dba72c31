#pragma once

#include <Eigen/Dense>

#include "kineticflock/kinetic/collocation.hpp"
#include "kineticflock/kinetic/spectral_field.hpp"

namespace kflock::kinetic {

enum class AlignmentMode { Local, Nonlocal };

/// psi(x) = (1 + x^2)^(-beta/2), rescaled as psi_eps(x) = psi(x/eps)/(eps |psi|_1).
struct AlignmentKernel {
  double beta = 2.0;
  double epsilon = 0.1;
  AlignmentMode mode = AlignmentMode::Local;
};

double kernel_profile(double x, double beta);
/// int_R (1 + x^2)^(-beta/2) dx, finite for beta > 1.
double kernel_l1_norm(double beta);

/// Fourier symbol of psi_eps sampled on a collocation grid with minimal-image
/// distances and normalized to unit discrete mass.
class KernelMultiplier {
 public:
  KernelMultiplier(const AlignmentKernel& kernel, const Collocation& grid);

  /// Real symbol for k = -K..K (index k + K).
  const Eigen::VectorXd& symbol() const noexcept { return symbol_; }
  /// Normalized grid weights w_j with sum_j w_j = discrete mass.
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  double discrete_mass() const noexcept { return mass_; }

  /// psi_eps * g for a spectral vector (length 2K + 1).
  Eigen::VectorXcd convolve(const Eigen::Ref<const Eigen::VectorXcd>& g) const;

 private:
  Eigen::VectorXd weights_;
  Eigen::VectorXd symbol_;
  double mass_ = 0.0;
};

/// u_F = b / (1 + a) at the collocation nodes.
Eigen::VectorXd compute_uF(const SpectralField& f, const Collocation& grid, double density_floor = 1e-6);

/// (psi_eps * b) / (psi_eps * (1 + a)) at the collocation nodes.
Eigen::VectorXd compute_uF_nonlocal(const SpectralField& f, const Collocation& grid,
                                    const KernelMultiplier& kernel, double density_floor = 1e-6);

}  // namespace kflock::kinetic
