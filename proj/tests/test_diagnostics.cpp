#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kineticflock/error.hpp"
#include "kineticflock/diagnostics/decay_fit.hpp"
#include "kineticflock/diagnostics/functionals.hpp"
#include "kineticflock/diagnostics/monitors.hpp"
#include "kineticflock/kinetic/solver.hpp"
#include "support/oracles.hpp"

using namespace kflock;
using namespace kflock::diag;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const kinetic::Complex kI{0.0, 1.0};

SpectralField random_field(int K, int N, double amplitude, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist;
  SpectralField f(K, N, kTwoPi);
  for (int k = 0; k <= K; ++k)
    for (int n = 0; n < N; ++n) f.set_real_mode(k, n, amplitude * Complex(dist(gen), k == 0 ? 0.0 : dist(gen)) / (1.0 + k + n));
  return f;
}

}  // namespace

TEST_CASE("macro fields against velocity quadrature") {
  const Collocation grid(4, kTwoPi);
  const SpectralField f = random_field(4, 8, 0.1, 3);
  const MacroFields m = macro_fields(f, grid);
  CHECK(m.dx == doctest::Approx(grid.dx()));
  for (int j = 0; j < grid.points(); j += 3) {
    const double x = grid.node(j);
    std::vector<double> c(8);
    for (int n = 0; n < 8; ++n) {
      Complex s = 0.0;
      for (int k = -4; k <= 4; ++k) s += f(k, n) * std::exp(kI * static_cast<double>(k) * x);
      c[n] = s.real();
    }
    const double a = oracle::trapezoid([&](double v) { return std::sqrt(oracle::maxwellian(v)) * oracle::expand(c, v); });
    const double b = oracle::trapezoid([&](double v) { return v * std::sqrt(oracle::maxwellian(v)) * oracle::expand(c, v); });
    CHECK(m.a[j] == doctest::Approx(a).epsilon(1e-9).scale(1e-2));
    CHECK(m.b[j] == doctest::Approx(b).epsilon(1e-9).scale(1e-2));
  }
}

TEST_CASE("Sobolev norms of a single mode") {
  SpectralField f(3, 8, kTwoPi / 2.0);  // kappa = 2 for k = 1
  const Complex c(0.3, -0.1);
  f.set_real_mode(1, 0, c);
  const double k2 = 4.0, m = 2.0 * std::norm(c);
  CHECK(sobolev_norm_sq(f, 1) == doctest::Approx((1.0 + k2 + 0.25) * m).epsilon(1e-14));
  CHECK(sobolev_norm_sq(f, 2) == doctest::Approx((1.0 + k2 + 0.25 + k2 * k2 + 0.25 * k2 + 3.0 / 16.0) * m).epsilon(1e-14));
  CHECK(spatial_sobolev_norm_sq(f, 2) == doctest::Approx((1.0 + k2 + k2 * k2) * m).epsilon(1e-14));
  CHECK(grad_ab_norm_sq(f, 2) == doctest::Approx((k2 + k2 * k2) * m).epsilon(1e-14));
  CHECK(micro_mu_norm_sq(f, 3) == 0.0);
  CHECK(micro_velocity_block(f, 3, {}) == 0.0);

  // top mode derivatives are not truncated
  SpectralField top(0, 4, kTwoPi);
  top(0, 3) = 1.0;
  CHECK(sobolev_norm_sq(top, 1) == doctest::Approx(1.0 + 3.0 / 4.0 + 4.0 / 4.0).epsilon(1e-14));
}

TEST_CASE("velocity moment v^2 - 1") {
  const double ref = oracle::trapezoid([](double v) { return (v * v - 1.0) * std::sqrt(oracle::maxwellian(v)) * oracle::psi(2, v); });
  CHECK(ref == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  SpectralField f(1, 6, kTwoPi);
  f(0, 2) = 0.5;
  f(0, 0) = 1.0;
  f(0, 1) = 2.0;
  f(0, 4) = 3.0;
  const Eigen::VectorXcd A = moment_Aij(f);
  CHECK(A[1].real() == doctest::Approx(0.5 * std::sqrt(2.0)));
  CHECK(std::abs(moment_Aij(micro_part(f))[1] - A[1]) < 1e-15);
  SpectralField g(1, 6, kTwoPi);
  g(0, 0) = 1.0;
  g(0, 1) = 1.0;
  CHECK(moment_Aij(g).norm() == 0.0);
}

TEST_CASE("linear and alignment parts of the micro equation") {
  const Collocation grid(2, kTwoPi);
  SpectralField macro(2, 8, kTwoPi);
  macro.set_real_mode(1, 0, 0.1);
  macro.set_real_mode(1, 1, 0.05);
  auto [ell, r] = ell_and_r(macro, grid);
  CHECK(ell.coeffs().norm() == 0.0);
  CHECK(r.coeffs().norm() < 1e-16);

  SpectralField still(2, 8, kTwoPi);
  still(0, 2) = 0.2;
  std::tie(ell, r) = ell_and_r(still, grid);
  CHECK(std::abs(ell(0, 2) + 0.4) < 1e-15);
  CHECK(r.coeffs().norm() < 1e-16);

  SpectralField drift = still;
  drift(0, 1) = 0.1;  // u = 0.1
  std::tie(ell, r) = ell_and_r(drift, grid);
  CHECK(r(0, 3).real() == doctest::Approx(std::sqrt(3.0) * 0.1 * 0.2).epsilon(1e-13));
  SpectralField rest = r;
  rest(0, 3) = 0.0;
  CHECK(rest.coeffs().norm() < 1e-15);
}

TEST_CASE("balance residuals") {
  const Collocation grid(2, kTwoPi);
  SpectralField zero(2, 8, kTwoPi);
  SpectralField later = zero;
  later.set_time(0.1);
  const BalanceResiduals z = balance_residuals(zero, later, grid);
  CHECK(z.mass_norm == 0.0);
  CHECK(z.momentum_norm == 0.0);
  CHECK(z.a11_norm == 0.0);
  CHECK_THROWS_AS(balance_residuals(later, zero, grid), Error);

  // a_t + b_x = 0 satisfied exactly by the difference quotient
  SpectralField before(2, 8, kTwoPi);
  before.set_real_mode(1, 1, 0.01);
  SpectralField after = before;
  const double dt = 0.01;
  after.set_time(dt);
  after.set_real_mode(1, 0, -dt * kI * 0.01);
  CHECK(balance_residuals(before, after, grid).mass_norm < 1e-17);

  // along a trajectory the residuals are first order in dt
  kinetic::SolverConfig c;
  c.K = 4;
  c.n_modes = 16;
  const kinetic::Solver solver(c);
  SpectralField f0 = random_field(4, 16, 0.01, 9);
  std::vector<double> res;
  for (double h : {2e-3, 1e-3}) {
    const SpectralField f1 = solver.step(f0, h);
    const BalanceResiduals b = balance_residuals(f0, f1, solver.grid());
    res.push_back(b.mass_norm + b.momentum_norm + b.a11_norm);
  }
  CHECK(res[0] / res[1] == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("cross term E0 and the total functional") {
  SpectralField f(2, 8, kTwoPi);
  const double alpha = 0.3, beta = 0.2;
  f.set_real_mode(1, 0, alpha);
  f.set_real_mode(1, 1, kI * beta);
  // -Re(a conj(i k b)) per mode, weight 1 + k^2 at s = 2
  CHECK(energy_E0(f, 2) == doctest::Approx(2.0 * 2.0 * alpha * beta).epsilon(1e-14));
  CHECK(std::abs(energy_E0(f, 2)) <= energy_E0_bound(f, 2));

  SpectralField g(2, 8, kTwoPi);
  g.set_real_mode(1, 1, kI * beta);
  g.set_real_mode(1, 2, 0.5);
  CHECK(energy_E0(g, 1) == doctest::Approx(-4.0 * std::sqrt(2.0) * beta * 0.5).epsilon(1e-14));

  const SpectralField z(2, 8, kTwoPi);
  const EnergyPair e0 = energy_total(z, 3, {});
  CHECK(e0.E == 0.0);
  CHECK(e0.D == 0.0);

  const SpectralField r = random_field(2, 8, 0.1, 5);
  EnergyWeights w1, w2;
  w2.nu2 = 2.0 * w1.nu2;
  const double base = w1.nu1 * spatial_sobolev_norm_sq(r, 3) + energy_E0(r, 3);
  CHECK(energy_total(r, 3, w2).E - energy_total(r, 3, w1).E == doctest::Approx(w1.nu2 * base).epsilon(1e-12));
  CHECK(energy_total(r, 3, w1).D == doctest::Approx(micro_mu_norm_sq(r, 3) + grad_ab_norm_sq(r, 3)));

  // cross term large enough to beat nu1 = 1
  SpectralField bad(2, 8, kTwoPi);
  bad.set_real_mode(1, 1, kI * 1.0);
  bad.set_real_mode(1, 2, 1.0);
  EnergyWeights weak;
  weak.nu1 = 1.0;
  try {
    energy_total(bad, 1, weak);
    FAIL("expected NonPositiveEnergy");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPositiveEnergy);
  }
  CHECK(weak.C_l(2) == 0.25);
}

TEST_CASE("report fields") {
  const Collocation grid(2, kTwoPi);
  SpectralField f = random_field(2, 8, 0.01, 2);
  f.set_time(0.5);
  const EnergyReport r = make_report(f, grid, 2, {});
  CHECK(r.t == 0.5);
  CHECK(r.mass == doctest::Approx(kTwoPi * f(0, 0).real()));
  CHECK(r.momentum == doctest::Approx(kTwoPi * f(0, 1).real()));
  CHECK(r.hs == doctest::Approx(std::sqrt(sobolev_norm_sq(f, 2))));
  CHECK(r.l2 == doctest::Approx(f.coeffs().norm()));
  CHECK_FALSE(r.has_residuals);
  CHECK(r.min_density < 1.1);
}

TEST_CASE("decay fits") {
  std::vector<double> t, alg, ex, noisy;
  for (int i = 0; i <= 200; ++i) {
    const double s = 0.5 * i;
    t.push_back(s);
    alg.push_back(3.0 * std::pow(1.0 + s, -0.25));
    ex.push_back(2.0 * std::exp(-0.7 * s));
    noisy.push_back(alg.back() * (1.0 + 0.01 * std::sin(3.0 * s)));
  }
  const DecayFit a = fit_decay(t, alg, DecayModel::Algebraic);
  CHECK(a.rate == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(a.log_prefactor == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  CHECK(a.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.samples == 201);
  const DecayFit e = fit_decay(t, ex, DecayModel::Exponential, 10.0, 50.0);
  CHECK(e.rate == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(e.samples == 81);
  CHECK(std::abs(fit_decay(t, noisy, DecayModel::Algebraic).rate - 0.25) < 0.01);
  CHECK_THROWS_AS(fit_decay(t, alg, DecayModel::Algebraic, 1000.0, 2000.0), Error);

  std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const LineFit l = fit_line(x, y);
  CHECK(l.slope == doctest::Approx(2.0));
  CHECK(l.intercept == doctest::Approx(1.0));
  CHECK(decay_model_from_string(diag::to_string(DecayModel::Algebraic)) == DecayModel::Algebraic);
}

TEST_CASE("dissipation constant of a synthetic trajectory") {
  std::vector<EnergyReport> reports;
  for (int i = 0; i <= 1000; ++i) {
    EnergyReport r;
    r.t = 0.01 * i;
    r.E_total = std::exp(-r.t);
    r.D_total = r.E_total;
    reports.push_back(r);
  }
  const DissipationFit fit = fit_dissipation_constant(reports, 1.0, 0.0, 0.95);
  // every backward difference of exp(-t) gives the same cap (e^h - 1)/h
  CHECK(fit.C5 == doctest::Approx((std::exp(0.01) - 1.0) / 0.01).epsilon(1e-9));
  CHECK(fit.fraction >= 0.95);
  CHECK(fit.hopeless == 0);
  CHECK(fit.steps == 900);
  CHECK_THROWS_AS(fit_dissipation_constant(reports, 100.0), Error);
}

TEST_CASE("macro relations stay bounded for small data") {
  kinetic::SolverConfig c;
  c.K = 4;
  c.n_modes = 16;
  const kinetic::Solver solver(c);
  SpectralField f = random_field(4, 16, 1e-3, 4);
  RelationMonitor mon;
  for (int i = 0; i < 200; ++i) {
    if (i % 20 == 0) mon.update(macro_relations(f, solver.grid(), 3));
    f = solver.step(f, 1e-3);
  }
  CHECK(mon.started());
  CHECK(mon.bounded(2.0));
  CHECK(mon.max_u() <= 1.01);
  CHECK(ell_bound_constant(f, solver.grid(), 3) > 0.0);
  CHECK(r_prefactor(f, solver.grid(), 3) < 1e-2);
}
