#pragma once

#include <vector>

#include "kineticflock/spectral/hermite_basis.hpp"

namespace kflock::spectral {

/// min over c orthogonal to sqrt(M) of -<Lc, c> / |{I-P0}c|_mu^2, computed as
/// the smallest generalized eigenvalue of (diag(deg), mu Gram) on the
/// complement of mode 0. One velocity dimension.
double coercivity_lambda0(const BasisShape& shape);

/// min over c orthogonal to sqrt(M) of -<Lc,c> / (lambda |{I-P}c|_mu^2 + |b|^2).
double coercivity_ratio_with_b(const BasisShape& shape, double lambda);

struct CoercivityFit {
  double lambda = 0.0;   ///< largest feasible lambda on the dyadic grid, 0 if none
  double min_ratio = 0.0;
  bool feasible = false;
};

/// Searches lambda in {2^-10, ..., 2^0} for the largest value with ratio >= 1.
CoercivityFit fit_coercivity_with_b(const BasisShape& shape);

}  // namespace kflock::spectral
