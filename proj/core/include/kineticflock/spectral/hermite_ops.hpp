#pragma once

// Recurrence operators on Hermite-function coefficient vectors.
//
// The basis functions are psi_n(v) = He_n(v) sqrt(M(v)) / sqrt(n!), with He_n
// the probabilists' Hermite polynomials and M the unit Maxwellian. In one
// velocity dimension:
//
//   v psi_n       = sqrt(n+1) psi_{n+1} + sqrt(n) psi_{n-1}
//   d/dv psi_n    = sqrt(n)/2 psi_{n-1} - sqrt(n+1)/2 psi_{n+1}
//   L psi_n       = -n psi_n
//   (-d/dv + v/2) psi_n = sqrt(n+1) psi_{n+1}          (raising)
//
// Multi-dimensional bases are full tensor products; operators act along one
// velocity component. Contributions that land outside the truncation are
// dropped unless the caller asks for an extended result.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>

#include "kineticflock/error.hpp"

namespace kflock::spectral {

using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

enum class Projection { P0, P1, P, IMinusP, IMinusP0 };

/// Index layout of a tensor-product basis with `n_modes` Hermite functions
/// per velocity component. Flat index = sum_j alpha_j * n_modes^j.
class BasisShape {
 public:
  BasisShape(int n_modes, int dim) : n_(n_modes), dim_(dim) {
    if (n_modes < 1 || dim < 1) {
      fail(ErrorKind::Config, "basis shape needs n_modes >= 1 and dim >= 1");
    }
    size_ = 1;
    for (int j = 0; j < dim; ++j) size_ *= n_modes;
  }

  int n_modes() const noexcept { return n_; }
  int dim() const noexcept { return dim_; }
  Eigen::Index size() const noexcept { return size_; }

  Eigen::Index stride(int component) const noexcept {
    Eigen::Index s = 1;
    for (int j = 0; j < component; ++j) s *= n_;
    return s;
  }

  int index_along(Eigen::Index flat, int component) const noexcept {
    return static_cast<int>((flat / stride(component)) % n_);
  }

  int total_degree(Eigen::Index flat) const noexcept {
    int deg = 0;
    for (int j = 0; j < dim_; ++j) deg += index_along(flat, j);
    return deg;
  }

  /// Flat index of the first-order mode along `component` (v_j sqrt(M)).
  Eigen::Index unit(int component) const noexcept { return stride(component); }

  BasisShape padded(int extra) const { return BasisShape(n_ + extra, dim_); }

  bool operator==(const BasisShape& other) const noexcept {
    return n_ == other.n_ && dim_ == other.dim_;
  }

 private:
  int n_;
  int dim_;
  Eigen::Index size_;
};

template <class Derived>
using PlainVector = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>;

namespace detail {

template <class Derived>
void require_size(const BasisShape& shape, const Eigen::MatrixBase<Derived>& c) {
  if (c.size() != shape.size()) {
    fail(ErrorKind::Shape, "coefficient vector has length " + std::to_string(c.size()) +
                               ", basis expects " + std::to_string(shape.size()));
  }
}

inline void require_component(const BasisShape& shape, int component) {
  if (component < 0 || component >= shape.dim()) {
    fail(ErrorKind::Shape, "velocity component " + std::to_string(component) +
                               " out of range for dim " + std::to_string(shape.dim()));
  }
}

// out[i] += lower_coef(alpha) * c[i - s] + upper_coef(alpha) * c[i + s], where
// alpha is the index of i along the component; lower pulls from alpha-1 and
// upper from alpha+1.
template <class Derived, class Lower, class Upper>
PlainVector<Derived> tridiagonal_along(const BasisShape& shape, const Eigen::MatrixBase<Derived>& c,
                                       int component, Lower lower, Upper upper) {
  require_size(shape, c);
  require_component(shape, component);
  const Eigen::Index s = shape.stride(component);
  const int n = shape.n_modes();
  PlainVector<Derived> out = PlainVector<Derived>::Zero(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const int alpha = shape.index_along(i, component);
    if (alpha > 0) out[i] += lower(alpha) * c[i - s];
    if (alpha + 1 < n) out[i] += upper(alpha) * c[i + s];
  }
  return out;
}

}  // namespace detail

/// Embeds coefficients into a larger truncation (zero fill).
template <class Derived>
PlainVector<Derived> pad(const BasisShape& shape, const Eigen::MatrixBase<Derived>& c,
                         const BasisShape& target) {
  detail::require_size(shape, c);
  if (target.dim() != shape.dim() || target.n_modes() < shape.n_modes()) {
    fail(ErrorKind::Shape, "pad target must have the same dim and at least as many modes");
  }
  PlainVector<Derived> out = PlainVector<Derived>::Zero(target.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    Eigen::Index j = 0;
    for (int d = 0; d < shape.dim(); ++d) j += shape.index_along(i, d) * target.stride(d);
    out[j] = c[i];
  }
  return out;
}

/// Fokker-Planck operator L f = Delta_v f + (2d - |v|^2)/4 f; diagonal with
/// eigenvalue minus the total degree.
template <class Derived>
PlainVector<Derived> apply_L(const BasisShape& shape, const Eigen::MatrixBase<Derived>& c) {
  detail::require_size(shape, c);
  PlainVector<Derived> out(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    out[i] = -static_cast<double>(shape.total_degree(i)) * c[i];
  }
  return out;
}

template <class Derived>
PlainVector<Derived> apply_mult_v(const BasisShape& shape, const Eigen::MatrixBase<Derived>& c,
                                  int component = 0) {
  return detail::tridiagonal_along(
      shape, c, component, [](int a) { return std::sqrt(static_cast<double>(a)); },
      [](int a) { return std::sqrt(static_cast<double>(a + 1)); });
}

template <class Derived>
PlainVector<Derived> apply_d_dv(const BasisShape& shape, const Eigen::MatrixBase<Derived>& c,
                                int component = 0) {
  return detail::tridiagonal_along(
      shape, c, component, [](int a) { return -0.5 * std::sqrt(static_cast<double>(a)); },
      [](int a) { return 0.5 * std::sqrt(static_cast<double>(a + 1)); });
}

/// (-d/dv_j + v_j/2): the combination appearing in the alignment term.
template <class Derived>
PlainVector<Derived> apply_raise(const BasisShape& shape, const Eigen::MatrixBase<Derived>& c,
                                 int component = 0) {
  return detail::tridiagonal_along(
      shape, c, component, [](int a) { return std::sqrt(static_cast<double>(a)); },
      [](int) { return 0.0; });
}

/// Same operators without truncation: the result lives in the basis with one
/// extra mode per component.
template <class Derived>
PlainVector<Derived> apply_mult_v_extended(const BasisShape& shape,
                                           const Eigen::MatrixBase<Derived>& c, int component = 0) {
  const BasisShape big = shape.padded(1);
  return apply_mult_v(big, pad(shape, c, big), component);
}

template <class Derived>
PlainVector<Derived> apply_d_dv_extended(const BasisShape& shape,
                                         const Eigen::MatrixBase<Derived>& c, int component = 0) {
  const BasisShape big = shape.padded(1);
  return apply_d_dv(big, pad(shape, c, big), component);
}

/// |f|_mu^2 = int |grad_v f|^2 + (1 + |v|^2) |f|^2 dv, evaluated exactly for
/// the truncated expansion (contributions past the last mode are kept).
template <class Derived>
double mu_norm_sq(const BasisShape& shape, const Eigen::MatrixBase<Derived>& c) {
  detail::require_size(shape, c);
  double total = c.squaredNorm();
  for (int j = 0; j < shape.dim(); ++j) {
    total += apply_d_dv_extended(shape, c, j).squaredNorm();
    total += apply_mult_v_extended(shape, c, j).squaredNorm();
  }
  return total;
}

/// Orthogonal projections onto span{sqrt(M)} (P0), span{v sqrt(M)} (P1) and
/// their sum P, plus the complements. All are index masks in this basis.
template <class Derived>
PlainVector<Derived> project(const BasisShape& shape, const Eigen::MatrixBase<Derived>& c,
                             Projection which) {
  detail::require_size(shape, c);
  auto keep = [&](Eigen::Index i) {
    const int deg = shape.total_degree(i);
    switch (which) {
      case Projection::P0: return deg == 0;
      case Projection::P1: return deg == 1;
      case Projection::P: return deg <= 1;
      case Projection::IMinusP: return deg >= 2;
      case Projection::IMinusP0: return deg >= 1;
    }
    return false;
  };
  PlainVector<Derived> out = PlainVector<Derived>::Zero(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (keep(i)) out[i] = c[i];
  }
  return out;
}

}  // namespace kflock::spectral
