#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "kineticflock/diagnostics/decay_fit.hpp"

namespace kflock::hypo {

/// Initial datum given in Fourier variables:
///   f0_hat(k) = |k|^(-gamma) exp(-(k/width)^2 / 2) * hermite.
/// A profile with gamma = 1 - 1/q sits at the edge of L^2_v(L^q_x), which sets
/// the decay index the semigroup bound predicts.
struct ModeProfile {
  Eigen::VectorXcd hermite;
  double low_k_exponent = 0.0;
  double width = 1.0;

  Eigen::VectorXcd at(double k) const;
  /// Profile whose low-k behaviour matches L^q data.
  static ModeProfile for_q(double q, int n_modes, double width = 1.0);
};

/// sigma_{d,q,m} = (d/2)(1/q - 1/2) + m/2.
double sigma_index(int d, double q, int m);

struct WavenumberQuadrature {
  /// Geometric Gauss-Legendre panels on [0, k_max]: the first covers
  /// [0, k_first] and the rest grow by a constant ratio.
  int panels = 64;
  int points_per_panel = 8;
  double k_first = 1e-4;
  double k_max = 8.0;

  std::vector<double> nodes;
  std::vector<double> weights;
  void build();
};

struct SemigroupConfig {
  int n_modes = 24;
  double kappa = 0.05;
  WavenumberQuadrature quadrature;
  /// Relative tolerance of the |k| > k_max tail against the smallest norm^2.
  double tail_tolerance = 1e-10;
  double fit_t0 = 1e2;
  double fit_t1 = 1e4;
  int threads = 1;
};

struct SemigroupResult {
  std::vector<double> t;
  /// |d_x^{k_x} e^{Bt} f0|_{L^2} over the whole line.
  std::vector<double> norm;
  diag::DecayFit fit;
  double predicted_sigma = 0.0;
  double tail_share = 0.0;
};

/// Whole-line norm of the linearized semigroup applied to the profile, from
/// per-k evolution and quadrature over k (doubled by the k -> -k symmetry).
SemigroupResult semigroup_decay(const ModeProfile& profile, double q, int k_x, int l_x,
                                const std::vector<double>& t_grid, const SemigroupConfig& config = {});

/// Source h(k, s) as a Hermite vector; must be micro (modes 0 and 1 zero).
using SourceSeries = std::function<Eigen::VectorXcd(double k, double s)>;

struct DuhamelResult {
  std::vector<double> t;
  std::vector<double> norm_sq;
  /// sup_t norm_sq(t) (1+t)^{2 sigma}: the fitted envelope constant.
  double envelope_constant = 0.0;
  double sigma = 0.0;
};

/// |d_x^{k_x} f(t)|^2 for d_t f = B f + h, f(0) = f0, by adaptive integration
/// in s at every wavenumber node and quadrature in k.
DuhamelResult duhamel_source(const ModeProfile& profile, const SourceSeries& h, double q, int k_x,
                             const std::vector<double>& t_grid, const SemigroupConfig& config = {});

/// Throws SourceNotMicro when h has a mode-0 or mode-1 component.
void require_micro_source(const Eigen::Ref<const Eigen::VectorXcd>& h, double k, double s);

/// Geometric grid of n points from t0 to t1.
std::vector<double> geometric_grid(double t0, double t1, int n);

}  // namespace kflock::hypo
