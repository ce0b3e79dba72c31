#pragma once

// Functionals of a torus perturbation f(x, v). All L^2 quantities are per
// unit length, sum_k |c_k|^2, so they do not scale with L_x; mass and
// momentum are the plain integrals over the torus.

#include <Eigen/Dense>

#include <optional>
#include <utility>
#include <vector>

#include "kineticflock/kinetic/collocation.hpp"
#include "kineticflock/kinetic/spectral_field.hpp"
#include "kineticflock/spectral/hermite_ops.hpp"

namespace kflock::diag {

using kinetic::Collocation;
using kinetic::Complex;
using kinetic::MacroFields;
using kinetic::SpectralField;

/// Weights of the total functional. C[l-1] multiplies the l-th velocity
/// derivative block; missing entries default to 2^-l.
struct EnergyWeights {
  double nu1 = 8.0;
  double nu2 = 8.0;
  std::vector<double> C;

  double C_l(int l) const;
};

MacroFields macro_fields(const SpectralField& f, const Collocation& grid);

/// sum_{k+l<=s} |d_x^k d_v^l f|^2; velocity derivatives are exact (no truncation).
double sobolev_norm_sq(const SpectralField& f, int s);
/// |f|^2 in L^2_v(H^s_x): sum_{k<=s} |d_x^k f|^2.
double spatial_sobolev_norm_sq(const SpectralField& f, int s);
/// sum_{k+l<=s} |d_x^k d_v^l {I-P} f|_mu^2.
double micro_mu_norm_sq(const SpectralField& f, int s);
/// sum_{l=1..s} C^l sum_{k<=s-l} |d_x^k d_v^l {I-P} f|^2.
double micro_velocity_block(const SpectralField& f, int s, const EnergyWeights& w);
/// |d_x (a, b)|^2 in H^{s-1}.
double grad_ab_norm_sq(const SpectralField& f, int s);

/// <(v_i v_j - delta_ij) sqrt(M), g> of one Hermite coefficient vector.
Complex moment_Aij(const spectral::BasisShape& shape, const Eigen::Ref<const Eigen::VectorXcd>& g, int i,
                   int j);
/// The same functional applied at every spatial mode (length 2K + 1).
Eigen::VectorXcd moment_Aij(const SpectralField& f, int i = 0, int j = 0);

/// Field restricted to Hermite modes >= 2.
SpectralField micro_part(const SpectralField& f);

/// l = -v d_x g + L g and r = u (v/2 - d_v) g with g = {I-P} f and u = b/(1+a).
std::pair<SpectralField, SpectralField> ell_and_r(const SpectralField& f, const Collocation& grid,
                                                  double density_floor = 1e-6);

struct BalanceResiduals {
  Eigen::VectorXcd mass;
  Eigen::VectorXcd momentum;
  Eigen::VectorXcd a11;
  double mass_norm = 0.0;
  double momentum_norm = 0.0;
  double a11_norm = 0.0;
};

/// Backward-difference residuals of the macro balance laws between two
/// snapshots; spatial terms are evaluated at the later one.
BalanceResiduals balance_residuals(const SpectralField& before, const SpectralField& after,
                                   const Collocation& grid, double density_floor = 1e-6);

double energy_E0(const SpectralField& f, int s);
/// Explicit Cauchy-Schwarz bound on |E0|: (sqrt(2) + 1/2) |f|^2_{L^2_v(H^s)}.
double energy_E0_bound(const SpectralField& f, int s);

struct EnergyPair {
  double E = 0.0;
  double D = 0.0;
};

/// Total functional and dissipation; throws NonPositiveEnergy when the weights
/// do not dominate E0.
EnergyPair energy_total(const SpectralField& f, int s, const EnergyWeights& w);

struct EnergyReport {
  double t = 0.0;
  double l2 = 0.0;
  double hs = 0.0;
  double mass = 0.0;
  double momentum = 0.0;
  double micro_mu = 0.0;
  double grad_ab = 0.0;
  double E0 = 0.0;
  double E_total = 0.0;
  double D_total = 0.0;
  double A11 = 0.0;
  double A11_ell = 0.0;
  double r_norm = 0.0;
  double residual_mass = 0.0;
  double residual_momentum = 0.0;
  double residual_A11 = 0.0;
  double energy_ratio = 0.0;
  double min_density = 1.0;
  double closure_flux = 0.0;
  bool has_residuals = false;
};

/// All functionals at one time; residuals are filled when `previous` is given.
EnergyReport make_report(const SpectralField& f, const Collocation& grid, int s, const EnergyWeights& w,
                         const SpectralField* previous = nullptr, double density_floor = 1e-6);

}  // namespace kflock::diag
