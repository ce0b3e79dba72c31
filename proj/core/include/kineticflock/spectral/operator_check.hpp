#pragma once

#include <vector>

namespace kflock::spectral {

/// Relative L2 error, on a uniform grid over [-v_max, v_max], between the
/// fourth-order finite-difference discretization of d^2/dv^2 + (2 - v^2)/4
/// applied to psi_n and the spectral L psi_n = -n psi_n, for n <= n_max.
/// Samples past the ends come from psi_n itself: at v_max = 10 psi_10 is
/// still ~3e-5, so zero ghosts would dominate the comparison.
struct OperatorCheck {
  std::vector<double> rel_error;
  double max_rel_error = 0.0;
};

OperatorCheck check_L_against_finite_differences(int n_max, int points, double v_max);

}  // namespace kflock::spectral
