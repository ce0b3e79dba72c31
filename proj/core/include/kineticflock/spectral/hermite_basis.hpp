#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "kineticflock/spectral/hermite_ops.hpp"

namespace kflock::spectral {

enum class OperatorKind {
  L,
  MultV,
  Ddv,
  /// Gram matrix of the mu inner product, |c|_mu^2 = c^T G c (bandwidth 2 in 1D).
  MuGram,
};

/// Dense matrix of one velocity operator on the truncated basis.
struct VelocityOperator {
  OperatorKind kind;
  int component = 0;
  Eigen::MatrixXd matrix;
};

/// Orthonormal Hermite-function basis together with a Gauss-Hermite rule of
/// 2 * n_modes nodes per component, enough to integrate products of two basis
/// functions exactly.
class HermiteBasis {
 public:
  explicit HermiteBasis(int n_modes, int dim = 1);

  const BasisShape& shape() const noexcept { return shape_; }
  int n_modes() const noexcept { return shape_.n_modes(); }
  int dim() const noexcept { return shape_.dim(); }
  Eigen::Index size() const noexcept { return shape_.size(); }

  /// One-dimensional nodes and weights for integrals against M(v) dv.
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// He_n(v_i)/sqrt(n!) at node i (rows) for n < n_modes (cols).
  const Eigen::MatrixXd& normalized_hermite() const noexcept { return hermite_at_nodes_; }

  /// psi_0..psi_{n-1} at an arbitrary velocity (1D).
  static void evaluate(double v, std::span<double> out);
  static double psi(int n, double v);

  /// Derivative d/dv psi_0..psi_{n-1} at v (1D).
  static void evaluate_derivative(double v, std::span<double> out);

  /// Quadrature Gram matrix int psi_m psi_n dv (1D).
  Eigen::MatrixXd quadrature_gram() const;

  VelocityOperator velocity_operator(OperatorKind kind, int component = 0) const;

 private:
  BasisShape shape_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  Eigen::MatrixXd hermite_at_nodes_;
};

/// Gauss rule for int g(v) M(v) dv with `n_nodes` nodes: Golub-Welsch, then a
/// Newton polish on He_n and Christoffel weights.
void gauss_hermite_rule(int n_nodes, std::vector<double>& nodes, std::vector<double>& weights);

/// Exact mu Gram matrix (1D), including contributions past the truncation.
Eigen::MatrixXd mu_gram_matrix(const BasisShape& shape);

}  // namespace kflock::spectral
