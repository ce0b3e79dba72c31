#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <numbers>
#include <random>

#include "kineticflock/error.hpp"
#include "kineticflock/spectral/coercivity.hpp"
#include "kineticflock/spectral/hermite_basis.hpp"
#include "kineticflock/spectral/operator_check.hpp"
#include "support/oracles.hpp"

using namespace kflock;
using namespace kflock::spectral;

namespace {

RealVector e(int n, int size) { return RealVector::Unit(size, n); }

RealVector random_vector(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist;
  RealVector c(n);
  for (int i = 0; i < n; ++i) c[i] = dist(gen) / (1.0 + i);
  return c;
}

}  // namespace

TEST_CASE("quadrature Gram matrix is the identity") {
  HermiteBasis basis(4);
  CHECK((basis.quadrature_gram() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
  HermiteBasis big(40);
  CHECK((big.quadrature_gram() - Eigen::MatrixXd::Identity(40, 40)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Gauss-Hermite rule integrates Gaussian moments") {
  std::vector<double> x, w;
  gauss_hermite_rule(12, x, w);
  double m0 = 0, m2 = 0, m4 = 0, m6 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    m0 += w[i];
    m2 += w[i] * std::pow(x[i], 2);
    m4 += w[i] * std::pow(x[i], 4);
    m6 += w[i] * std::pow(x[i], 6);
  }
  CHECK(m0 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(m2 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(m4 == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(m6 == doctest::Approx(15.0).epsilon(1e-13));
}

TEST_CASE("basis functions at fixed points") {
  CHECK(HermiteBasis::psi(0, 0.0) == doctest::Approx(std::pow(2.0 * std::numbers::pi, -0.25)).epsilon(1e-15));
  CHECK(HermiteBasis::psi(1, 1.0) == doctest::Approx(HermiteBasis::psi(0, 1.0)).epsilon(1e-15));
  for (int n : {0, 3, 7, 20}) {
    for (double v : {-3.3, 0.4, 5.0}) {
      CHECK(HermiteBasis::psi(n, v) == doctest::Approx(oracle::psi(n, v)).epsilon(1e-12));
    }
  }
}

TEST_CASE("L is diagonal with eigenvalue minus the degree") {
  const BasisShape s(8, 1);
  CHECK(apply_L(s, e(0, 8)).norm() == 0.0);
  CHECK((apply_L(s, e(1, 8)) + e(1, 8)).norm() == 0.0);
  CHECK((apply_L(s, e(2, 8)) + 2.0 * e(2, 8)).norm() == 0.0);
}

TEST_CASE("L agrees with a finite-difference Fokker-Planck operator") {
  // Richardson-extrapolated second differences on 4096 points of [-10, 10].
  const int points = 4096;
  const double h = 20.0 / (points - 1);
  const BasisShape s(11, 1);
  for (int n = 0; n <= 10; ++n) {
    const RealVector Lc = apply_L(s, e(n, 11));
    double err = 0.0, ref = 0.0;
    for (int i = 0; i < points; ++i) {
      const double v = -10.0 + i * h;
      auto d2 = [&](double step) {
        return (oracle::psi(n, v + step) - 2.0 * oracle::psi(n, v) + oracle::psi(n, v - step)) / (step * step);
      };
      const double second = (4.0 * d2(h / 2) - d2(h)) / 3.0;
      const double fd = second + 0.25 * (2.0 - v * v) * oracle::psi(n, v);
      const double spec = Lc[n] * oracle::psi(n, v);
      err += (fd - spec) * (fd - spec);
      ref += oracle::psi(n, v) * oracle::psi(n, v);
    }
    CHECK(std::sqrt(err / ref) < 1e-6);
  }
  const OperatorCheck check = check_L_against_finite_differences(10, 4096, 10.0);
  CHECK(check.rel_error.size() == 11);
  CHECK(check.max_rel_error < 1e-6);
}

TEST_CASE("mult_v and d_dv recurrences") {
  const BasisShape s(6, 1);
  CHECK((apply_mult_v(s, e(0, 6)) - e(1, 6)).norm() < 1e-15);
  CHECK((apply_d_dv(s, e(0, 6)) + 0.5 * e(1, 6)).norm() < 1e-15);
  CHECK((apply_mult_v(s, e(1, 6)) - std::sqrt(2.0) * e(2, 6) - e(0, 6)).norm() < 1e-15);

  // Matrix elements against trapezoid quadrature of the defining integrals.
  for (int n = 0; n < 5; ++n) {
    const RealVector vc = apply_mult_v(s, e(n, 6));
    const RealVector dc = apply_d_dv(s, e(n, 6));
    for (int m = 0; m < 6; ++m) {
      const double v_ref = oracle::trapezoid([&](double v) { return oracle::psi(m, v) * v * oracle::psi(n, v); });
      const double d_ref = oracle::trapezoid([&](double v) { return oracle::psi(m, v) * oracle::dpsi(n, v); });
      CHECK(vc[m] == doctest::Approx(v_ref).epsilon(1e-8).scale(1.0));
      CHECK(dc[m] == doctest::Approx(d_ref).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("raising operator") {
  const BasisShape s(5, 1);
  const RealVector r = apply_raise(s, e(2, 5));
  CHECK(r[3] == doctest::Approx(std::sqrt(3.0)));
  CHECK(r.norm() == doctest::Approx(std::sqrt(3.0)));
  const RealVector d = apply_mult_v(s, e(1, 5)) * 0.5 - apply_d_dv(s, e(1, 5));
  CHECK((d - apply_raise(s, e(1, 5))).norm() < 1e-15);
}

TEST_CASE("mu norm") {
  const BasisShape s(10, 1);
  CHECK(mu_norm_sq(s, e(0, 10)) == doctest::Approx(9.0 / 4.0).epsilon(1e-15));
  CHECK(mu_norm_sq(s, RealVector::Zero(10)) == 0.0);

  // Exact past the truncation: the top mode is included in full.
  const RealVector c = random_vector(10, 3);
  const double ref = oracle::trapezoid([&](double v) {
    const double f = oracle::expand(c, v), df = oracle::expand_dv(c, v);
    return df * df + (1.0 + v * v) * f * f;
  });
  CHECK(mu_norm_sq(s, c) == doctest::Approx(ref).epsilon(1e-8));

  const Eigen::MatrixXd G = HermiteBasis(10).velocity_operator(OperatorKind::MuGram).matrix;
  CHECK(c.dot(G * c) == doctest::Approx(mu_norm_sq(s, c)).epsilon(1e-13));

  const BasisShape s2(4, 2);
  CHECK(mu_norm_sq(s2, RealVector::Unit(16, 0)) == doctest::Approx(3.5).epsilon(1e-15));
}

TEST_CASE("projections") {
  const int n = 8;
  const BasisShape s(n, 1);
  CHECK(project(s, e(2, n), Projection::P).norm() == 0.0);
  const RealVector ones = RealVector::Ones(n) / std::sqrt(static_cast<double>(n));
  CHECK((project(s, ones, Projection::P0) - e(0, n) / std::sqrt(static_cast<double>(n))).norm() < 1e-15);
  const RealVector c = random_vector(n, 9);
  const RealVector pc = project(s, c, Projection::P);
  const RealVector qc = project(s, c, Projection::IMinusP);
  CHECK((pc + qc - c).norm() < 1e-15);
  CHECK(std::abs(pc.dot(qc)) < 1e-15);
  CHECK((project(s, c, Projection::P1) + project(s, c, Projection::P0) - pc).norm() < 1e-15);
  CHECK((project(s, c, Projection::IMinusP0) + project(s, c, Projection::P0) - c).norm() < 1e-15);
}

TEST_CASE("tensor basis in two velocity dimensions") {
  const BasisShape s(3, 2);
  CHECK(s.size() == 9);
  // flat index 1 + 3*2 = (1, 2): total degree 3
  CHECK(apply_L(s, RealVector::Unit(9, 7))[7] == -3.0);
  const RealVector v1 = apply_mult_v(s, RealVector::Unit(9, 0), 1);
  CHECK(v1[3] == doctest::Approx(1.0));
}

TEST_CASE("velocity operator matrices") {
  const HermiteBasis basis(6);
  const auto V = basis.velocity_operator(OperatorKind::MultV).matrix;
  CHECK((V - V.transpose()).norm() < 1e-15);
  const auto D = basis.velocity_operator(OperatorKind::Ddv).matrix;
  CHECK((D + D.transpose()).norm() < 1e-15);
  const auto L = basis.velocity_operator(OperatorKind::L).matrix;
  CHECK(L(5, 5) == -5.0);
}

TEST_CASE("shape errors") {
  const BasisShape s(4, 1);
  CHECK_THROWS_AS(apply_L(s, RealVector::Zero(5)), Error);
  try {
    apply_mult_v(s, RealVector::Zero(3));
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::Shape);
  }
  CHECK_THROWS_AS(HermiteBasis(2), Error);
}

TEST_CASE("coercivity constant") {
  std::vector<double> lambdas;
  for (int n : {16, 32, 64}) {
    const double lambda0 = coercivity_lambda0(BasisShape(n, 1));
    CHECK(lambda0 > 0.0);
    lambdas.push_back(lambda0);
  }
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    CHECK(std::abs(lambdas[i] - lambdas[i - 1]) / lambdas[i - 1] <= 0.10);
  }

  // Oracle: generalized eigenproblem assembled from quadrature on modes 1..n-1.
  const int n = 16;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n - 1, n - 1), B(n - 1, n - 1);
  for (int i = 1; i < n; ++i) {
    A(i - 1, i - 1) = i;
    for (int j = 1; j < n; ++j) {
      B(i - 1, j - 1) = oracle::trapezoid([&](double v) {
        return oracle::dpsi(i, v) * oracle::dpsi(j, v) + (1.0 + v * v) * oracle::psi(i, v) * oracle::psi(j, v);
      }, -16.0, 16.0, 6001);
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(A, B);
  CHECK(coercivity_lambda0(BasisShape(n, 1)) == doctest::Approx(ges.eigenvalues().minCoeff()).epsilon(1e-7));

  const CoercivityFit fit = fit_coercivity_with_b(BasisShape(16, 1));
  CHECK(fit.feasible);
  CHECK(fit.lambda > 0.0);
  CHECK(coercivity_ratio_with_b(BasisShape(16, 1), fit.lambda) >= 1.0 - 1e-12);
}
