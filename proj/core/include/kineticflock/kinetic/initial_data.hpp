#pragma once

#include <cstdint>
#include <vector>

#include "kineticflock/kinetic/collocation.hpp"
#include "kineticflock/kinetic/spectral_field.hpp"

namespace kflock::kinetic {

enum class InitialKind {
  Zero,
  /// Explicit (k, n) coefficients; conjugate partners are filled in.
  Modes,
  /// F0 = (1 + a0(x)) M(v - u0(x)) with cosine profiles a0, u0.
  ShiftedMaxwellian,
  /// Seeded Gaussian coefficients on |k| <= k_max, n < n_max.
  Random,
  /// Slowest eigenvector of the linearized generator at wavenumber index k.
  Eigenmode,
};

struct ModeEntry {
  int k = 0;
  int n = 0;
  double re = 0.0;
  double im = 0.0;
};

/// amplitude * cos(2 pi m x / L_x + phase)
struct CosineTerm {
  int m = 0;
  double amplitude = 0.0;
  double phase = 0.0;
};

struct InitialDataSpec {
  InitialKind kind = InitialKind::Zero;
  std::vector<ModeEntry> modes;
  std::vector<CosineTerm> density;
  std::vector<CosineTerm> velocity;
  /// Target |f0|_{H^s} for Random and Eigenmode; ignored otherwise.
  double amplitude = 1e-3;
  int k_max = 4;
  int n_max = 4;
  /// Zero the k = 0 entries of Hermite modes 0 and 1 (Random only).
  bool zero_mean_macro = true;
  int eigen_k = 1;
};

SpectralField make_initial_field(const InitialDataSpec& spec, int K, int n_modes, double domain_length,
                                 int sobolev_order, std::uint64_t seed);

/// min over collocation nodes and Gauss-Hermite velocity nodes of
/// F / M = 1 + sum_n c_n He_n(v)/sqrt(n!), i.e. the sign of F = M + sqrt(M) f.
double min_relative_phase_density(const SpectralField& f, const Collocation& grid);

}  // namespace kflock::kinetic
