#pragma once

#include <span>
#include <vector>

#include "kineticflock/diagnostics/functionals.hpp"

namespace kflock::diag {

/// Per-order ratios |d^k (a,b)| / |d^k f| and |d^k u| / |d^k (a,b)|, u = b/(1+a),
/// for k = 0..s. Orders where the denominator vanishes report 0.
struct MacroRelations {
  std::vector<double> ab_over_f;
  std::vector<double> u_over_ab;
  double max_ab_over_f = 0.0;
  double max_u_over_ab = 0.0;
};

MacroRelations macro_relations(const SpectralField& f, const Collocation& grid, int s,
                               double density_floor = 1e-6);

/// Tracks the maxima of the macro relation ratios along a trajectory.
class RelationMonitor {
 public:
  void update(const MacroRelations& r);
  bool started() const noexcept { return started_; }
  double initial_ab() const noexcept { return initial_ab_; }
  double initial_u() const noexcept { return initial_u_; }
  double max_ab() const noexcept { return max_ab_; }
  double max_u() const noexcept { return max_u_; }
  /// Finite and no growth beyond `factor` times the initial value.
  bool bounded(double factor = 2.0) const;

 private:
  bool started_ = false;
  double initial_ab_ = 0.0, initial_u_ = 0.0, max_ab_ = 0.0, max_u_ = 0.0;
};

/// sum_{k<=s-1} |d^k A11(l)| / sum_{k<=s} |d^k {I-P} f|.
double ell_bound_constant(const SpectralField& f, const Collocation& grid, int s, double density_floor = 1e-6);
/// sum_{k<=s-1} |d^k r| / sum_{k<=s} |d^k {I-P} f|: the small prefactor of the
/// r-bound, proportional to the amplitude of u.
double r_prefactor(const SpectralField& f, const Collocation& grid, int s, double density_floor = 1e-6);

struct DissipationFit {
  /// Largest C5 with dE/dt + C5 D <= tol E on the required fraction of steps.
  double C5 = 0.0;
  /// Fraction of steps satisfying the inequality at the returned C5.
  double fraction = 0.0;
  int steps = 0;
  /// Steps with dE/dt > tol E and D = 0 (no C5 can help).
  int hopeless = 0;
};

/// Line search over consecutive reports with t > t_after.
DissipationFit fit_dissipation_constant(std::span<const EnergyReport> reports, double t_after,
                                        double tolerance = 1e-10, double required_fraction = 0.95);

}  // namespace kflock::diag
