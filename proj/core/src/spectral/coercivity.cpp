#include "kineticflock/spectral/coercivity.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace kflock::spectral {

namespace {

void require_1d(const BasisShape& shape) {
  if (shape.dim() != 1) fail(ErrorKind::Config, "coercivity analysis is implemented for dim = 1");
  if (shape.n_modes() < 4) fail(ErrorKind::Config, "coercivity analysis needs n_modes >= 4");
}

double smallest_generalized_eigenvalue(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, b);
  if (solver.info() != Eigen::Success) fail(ErrorKind::NonFinite, "generalized eigensolve failed");
  return solver.eigenvalues().minCoeff();
}

}  // namespace

double coercivity_lambda0(const BasisShape& shape) {
  require_1d(shape);
  const Eigen::Index n = shape.size();
  const Eigen::MatrixXd gram = mu_gram_matrix(shape);
  // c orthogonal to e_0 means {I-P0}c = c.
  const Eigen::Index m = n - 1;
  Eigen::MatrixXd dissipation = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) dissipation(i, i) = static_cast<double>(i + 1);
  return smallest_generalized_eigenvalue(dissipation, gram.bottomRightCorner(m, m));
}

double coercivity_ratio_with_b(const BasisShape& shape, double lambda) {
  require_1d(shape);
  if (!(lambda > 0.0)) fail(ErrorKind::Config, "lambda must be positive");
  const Eigen::Index n = shape.size();
  const Eigen::MatrixXd gram = mu_gram_matrix(shape);
  const Eigen::Index m = n - 1;  // modes 1..n-1
  Eigen::MatrixXd dissipation = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) dissipation(i, i) = static_cast<double>(i + 1);
  // Weight: |b|^2 on mode 1, lambda * mu Gram restricted to modes >= 2.
  Eigen::MatrixXd weight = Eigen::MatrixXd::Zero(m, m);
  weight(0, 0) = 1.0;
  weight.bottomRightCorner(m - 1, m - 1) = lambda * gram.bottomRightCorner(n - 2, n - 2);
  return smallest_generalized_eigenvalue(dissipation, weight);
}

CoercivityFit fit_coercivity_with_b(const BasisShape& shape) {
  CoercivityFit best;
  for (int p = -10; p <= 0; ++p) {
    const double lambda = std::ldexp(1.0, p);
    const double ratio = coercivity_ratio_with_b(shape, lambda);
    if (ratio >= 1.0 - 1e-12) {
      best.lambda = lambda;
      best.min_ratio = ratio;
      best.feasible = true;
    }
  }
  return best;
}

}  // namespace kflock::spectral
