#include "kineticflock/kinetic/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "kineticflock/diagnostics/functionals.hpp"
#include "kineticflock/error.hpp"
#include "kineticflock/hypo/linear_mode.hpp"
#include "kineticflock/spectral/hermite_basis.hpp"

namespace kflock::kinetic {

namespace {

void scale_to_hs(SpectralField& f, double target, int s) {
  const double norm = std::sqrt(diag::sobolev_norm_sq(f, s));
  if (norm == 0.0) fail(ErrorKind::Config, "initial profile is identically zero; cannot scale to amplitude");
  f *= target / norm;
}

Eigen::VectorXd cosine_profile(const std::vector<CosineTerm>& terms, const Collocation& grid) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(grid.points());
  for (const auto& term : terms) {
    for (int j = 0; j < grid.points(); ++j) {
      const double phase = 2.0 * std::numbers::pi * term.m * grid.node(j) / grid.domain_length() + term.phase;
      out[j] += term.amplitude * std::cos(phase);
    }
  }
  return out;
}

SpectralField shifted_maxwellian(const InitialDataSpec& spec, int K, int n_modes, double length) {
  for (const auto* terms : {&spec.density, &spec.velocity}) {
    for (const auto& t : *terms) {
      if (std::abs(t.m) > K) fail(ErrorKind::Config, "profile wavenumber exceeds K");
    }
  }
  // Oversample so the Hermite coefficients (1 + a0) u0^n / sqrt(n!) are
  // projected with negligible aliasing.
  const Collocation grid(K, length, 8 * (K + 1));
  const Eigen::VectorXd a0 = cosine_profile(spec.density, grid);
  const Eigen::VectorXd u0 = cosine_profile(spec.velocity, grid);
  if ((a0.array() + 1.0).minCoeff() <= 0.0) fail(ErrorKind::Config, "density profile 1 + a0 must stay positive");

  SpectralField f(K, n_modes, length);
  Eigen::VectorXd term = (a0.array() + 1.0).matrix();
  for (int n = 0; n < n_modes; ++n) {
    if (n > 0) term = term.cwiseProduct(u0) / std::sqrt(static_cast<double>(n));
    Eigen::VectorXd values = term;
    if (n == 0) values.array() -= 1.0;
    f.coeffs().row(n) = grid.from_grid(values).transpose();
  }
  return f;
}

SpectralField random_field(const InitialDataSpec& spec, int K, int n_modes, double length, int s,
                           std::uint64_t seed) {
  if (spec.k_max < 0 || spec.k_max > K) fail(ErrorKind::Config, "random k_max must lie in [0, K]");
  if (spec.n_max < 1 || spec.n_max > n_modes) fail(ErrorKind::Config, "random n_max must lie in [1, n_modes]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  SpectralField f(K, n_modes, length);
  for (int k = 0; k <= spec.k_max; ++k) {
    for (int n = 0; n < spec.n_max; ++n) {
      const double re = normal(rng);
      const double im = normal(rng);
      f.set_real_mode(k, n, Complex(re, k == 0 ? 0.0 : im));
    }
  }
  if (spec.zero_mean_macro) {
    f(0, 0) = 0.0;
    if (n_modes > 1) f(0, 1) = 0.0;
  }
  scale_to_hs(f, spec.amplitude, s);
  return f;
}

SpectralField eigenmode_field(const InitialDataSpec& spec, int K, int n_modes, double length, int s) {
  if (spec.eigen_k < 1 || spec.eigen_k > K) fail(ErrorKind::Config, "eigen_k must lie in [1, K]");
  SpectralField f(K, n_modes, length);
  const hypo::LinearModeSystem system(f.wavenumber(spec.eigen_k), n_modes);
  const Eigen::VectorXcd v = system.slowest_eigenvector();
  for (int n = 0; n < n_modes; ++n) f.set_real_mode(spec.eigen_k, n, v[n]);
  scale_to_hs(f, spec.amplitude, s);
  return f;
}

}  // namespace

SpectralField make_initial_field(const InitialDataSpec& spec, int K, int n_modes, double length, int s,
                                 std::uint64_t seed) {
  switch (spec.kind) {
    case InitialKind::Zero:
      return SpectralField(K, n_modes, length);
    case InitialKind::Modes: {
      SpectralField f(K, n_modes, length);
      for (const auto& m : spec.modes) {
        if (std::abs(m.k) > K || m.n < 0 || m.n >= n_modes) {
          fail(ErrorKind::Config, "initial mode (" + std::to_string(m.k) + ", " + std::to_string(m.n) +
                                      ") is outside the truncation");
        }
        const Complex value(m.re, m.im);
        f.set_real_mode(std::abs(m.k), m.n, m.k >= 0 ? value : std::conj(value));
      }
      return f;
    }
    case InitialKind::ShiftedMaxwellian:
      return shifted_maxwellian(spec, K, n_modes, length);
    case InitialKind::Random:
      return random_field(spec, K, n_modes, length, s, seed);
    case InitialKind::Eigenmode:
      return eigenmode_field(spec, K, n_modes, length, s);
  }
  fail(ErrorKind::Config, "unknown initial data kind");
}

double min_relative_phase_density(const SpectralField& f, const Collocation& grid) {
  const spectral::HermiteBasis basis(std::max(f.n_modes(), 4));
  const Eigen::MatrixXd values = grid.rows_to_grid(f.coeffs());  // n_modes x points
  const Eigen::MatrixXd& h = basis.normalized_hermite();          // nodes x n_modes
  const Eigen::MatrixXd rel = h.leftCols(f.n_modes()) * values;   // nodes x points
  return 1.0 + rel.minCoeff();
}

}  // namespace kflock::kinetic
