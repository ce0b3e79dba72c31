#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "kineticflock/diagnostics/functionals.hpp"
#include "kineticflock/kinetic/alignment.hpp"
#include "kineticflock/kinetic/collocation.hpp"
#include "kineticflock/kinetic/initial_data.hpp"
#include "kineticflock/kinetic/spectral_field.hpp"

namespace kflock::kinetic {

enum class TimeScheme { ImexEuler, Ars222 };

struct SolverConfig {
  int K = 16;
  int n_modes = 32;
  double domain_length = 6.283185307179586;
  double dt = 1e-3;
  double t_end = 1.0;
  int sobolev_order = 3;
  TimeScheme scheme = TimeScheme::ImexEuler;
  AlignmentKernel kernel;
  InitialDataSpec initial;
  diag::EnergyWeights weights;
  /// Time between EnergyReports; 0 reports every step.
  double report_interval = 0.1;
  /// Time between binary snapshots; 0 disables them.
  double snapshot_interval = 0.0;
  double density_floor = 1e-6;
  /// dt <= cfl * dx / v_max with dx = L_x / (2K), v_max = sqrt(2 N_v).
  double cfl = 1.0;
  /// dt * kmax^2 <= damping_number keeps the explicit transport stable
  /// against the implicit damping of the first Hermite modes.
  double damping_number = 0.4;
  std::uint64_t seed = 0;
  int threads = 1;
};

void validate(const SolverConfig& config);

struct StabilityLimits {
  double dt_advection = 0.0;
  double dt_damping = 0.0;
  double dt_max() const { return std::min(dt_advection, dt_damping); }
};

StabilityLimits stability_limits(const SolverConfig& config);

/// Spectral discretization of
///   d_t f = -v d_x f + L f + u (v/2 - d_v) f + u v sqrt(M),
/// with u the local or nonlocal alignment velocity.
class Solver {
 public:
  explicit Solver(const SolverConfig& config);

  const SolverConfig& config() const noexcept { return config_; }
  const Collocation& grid() const noexcept { return grid_; }
  const std::optional<KernelMultiplier>& kernel() const noexcept { return kernel_; }

  Eigen::VectorXd alignment_velocity(const SpectralField& f) const;

  /// Transport plus alignment (everything explicit in the IMEX split).
  SpectralField explicit_part(const SpectralField& f) const;
  SpectralField rhs(const SpectralField& f) const;

  /// Throws CflViolation when dt exceeds either stability limit.
  void check_stability(double dt) const;
  SpectralField step(const SpectralField& f, double dt) const;

  /// Norm of the Hermite flux through the truncation boundary.
  double closure_flux(const SpectralField& f) const;

  SpectralField make_field() const;

 private:
  void apply_implicit(SpectralField& f, double factor) const;

  SolverConfig config_;
  Collocation grid_;
  std::optional<KernelMultiplier> kernel_;
};

/// Free-function forms of the solver operations.
SpectralField rhs(const Solver& solver, const SpectralField& f);
SpectralField step_imex(const Solver& solver, const SpectralField& f, double dt);

}  // namespace kflock::kinetic
