#include "kineticflock/spectral/hermite_basis.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kflock::spectral {

namespace {

// Orthonormal (w.r.t. M dv) Hermite polynomials h_0..h_{n-1} at x, together
// with h_n so callers can run Newton on the n-point rule.
void normalized_hermite_values(int n, double x, std::vector<double>& h) {
  h.assign(static_cast<std::size_t>(n) + 1, 0.0);
  h[0] = 1.0;
  if (n >= 1) h[1] = x;
  for (int k = 1; k < n; ++k) {
    h[k + 1] = (x * h[k] - std::sqrt(static_cast<double>(k)) * h[k - 1]) /
               std::sqrt(static_cast<double>(k + 1));
  }
}

}  // namespace

void gauss_hermite_rule(int n_nodes, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n_nodes < 1) fail(ErrorKind::Config, "Gauss-Hermite rule needs at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
  for (int k = 1; k < n_nodes; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  nodes.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + n_nodes);

  std::vector<double> h;
  for (double& x : nodes) {
    for (int it = 0; it < 3; ++it) {
      normalized_hermite_values(n_nodes, x, h);
      // h_n' = sqrt(n) h_{n-1}
      const double deriv = std::sqrt(static_cast<double>(n_nodes)) * h[n_nodes - 1];
      if (deriv == 0.0) break;
      x -= h[n_nodes] / deriv;
    }
  }
  std::sort(nodes.begin(), nodes.end());

  weights.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    normalized_hermite_values(n_nodes, nodes[i], h);
    double christoffel = 0.0;
    for (int k = 0; k < n_nodes; ++k) christoffel += h[k] * h[k];
    weights[i] = 1.0 / christoffel;
  }
}

HermiteBasis::HermiteBasis(int n_modes, int dim) : shape_(std::max(n_modes, 1), std::max(dim, 1)) {
  if (n_modes < 4) {
    fail(ErrorKind::Config, "HermiteBasis needs n_modes >= 4 (macro modes plus micro headroom), got " +
                                std::to_string(n_modes));
  }
  if (dim < 1) fail(ErrorKind::Config, "velocity dimension must be >= 1");

  gauss_hermite_rule(2 * n_modes, nodes_, weights_);
  hermite_at_nodes_.resize(static_cast<Eigen::Index>(nodes_.size()), n_modes);
  std::vector<double> h;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    normalized_hermite_values(n_modes, nodes_[i], h);
    for (int n = 0; n < n_modes; ++n) hermite_at_nodes_(static_cast<Eigen::Index>(i), n) = h[n];
  }
}

void HermiteBasis::evaluate(double v, std::span<double> out) {
  if (out.empty()) return;
  out[0] = std::pow(2.0 * std::numbers::pi, -0.25) * std::exp(-0.25 * v * v);
  if (out.size() > 1) out[1] = v * out[0];
  for (std::size_t n = 1; n + 1 < out.size(); ++n) {
    out[n + 1] = (v * out[n] - std::sqrt(static_cast<double>(n)) * out[n - 1]) /
                 std::sqrt(static_cast<double>(n + 1));
  }
}

double HermiteBasis::psi(int n, double v) {
  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  evaluate(v, values);
  return values.back();
}

void HermiteBasis::evaluate_derivative(double v, std::span<double> out) {
  std::vector<double> values(out.size() + 1);
  evaluate(v, values);
  for (std::size_t n = 0; n < out.size(); ++n) {
    const double lower = n > 0 ? 0.5 * std::sqrt(static_cast<double>(n)) * values[n - 1] : 0.0;
    out[n] = lower - 0.5 * std::sqrt(static_cast<double>(n + 1)) * values[n + 1];
  }
}

Eigen::MatrixXd HermiteBasis::quadrature_gram() const {
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(weights_.data(), static_cast<Eigen::Index>(weights_.size()));
  return hermite_at_nodes_.transpose() * w.asDiagonal() * hermite_at_nodes_;
}

Eigen::MatrixXd mu_gram_matrix(const BasisShape& shape) {
  const Eigen::Index n = shape.size();
  const Eigen::Index big = shape.padded(1).size();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(n, n);
  for (int c = 0; c < shape.dim(); ++c) {
    Eigen::MatrixXd d(big, n), v(big, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const RealVector ej = RealVector::Unit(n, j);
      d.col(j) = apply_d_dv_extended(shape, ej, c);
      v.col(j) = apply_mult_v_extended(shape, ej, c);
    }
    gram += d.transpose() * d + v.transpose() * v;
  }
  return gram;
}

VelocityOperator HermiteBasis::velocity_operator(OperatorKind kind, int component) const {
  const Eigen::Index n = shape_.size();
  VelocityOperator op{kind, component, Eigen::MatrixXd::Zero(n, n)};
  if (kind == OperatorKind::MuGram) {
    op.matrix = mu_gram_matrix(shape_);
    return op;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const RealVector ej = RealVector::Unit(n, j);
    switch (kind) {
      case OperatorKind::L: op.matrix.col(j) = apply_L(shape_, ej); break;
      case OperatorKind::MultV: op.matrix.col(j) = apply_mult_v(shape_, ej, component); break;
      case OperatorKind::Ddv: op.matrix.col(j) = apply_d_dv(shape_, ej, component); break;
      case OperatorKind::MuGram: break;
    }
  }
  return op;
}

}  // namespace kflock::spectral
