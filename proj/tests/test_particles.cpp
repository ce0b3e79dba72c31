#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kineticflock/error.hpp"
#include "kineticflock/diagnostics/decay_fit.hpp"
#include "kineticflock/particles/moments.hpp"
#include "kineticflock/particles/run.hpp"

using namespace kflock;
using namespace kflock::particles;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// psi_eps for beta = 2: 1 / (pi eps (1 + (d/eps)^2)) at the minimal image.
double cauchy(double d, double eps, double L) {
  d = d - L * std::round(d / L);
  return 1.0 / (std::numbers::pi * eps * (1.0 + (d / eps) * (d / eps)));
}

ParticleEnsemble spread(int n, double L, std::uint64_t seed) {
  ParticleEnsemble e(n, L, seed);
  std::mt19937_64 gen(seed + 100);
  std::uniform_real_distribution<double> u(0.0, L);
  std::normal_distribution<double> g;
  for (int i = 0; i < n; ++i) {
    e.x()[i] = u(gen);
    e.v()[i] = g(gen);
  }
  return e;
}

}  // namespace

TEST_CASE("communication weight") {
  ModelSpec m;
  m.epsilon = 0.3;
  CHECK(communication_weight(0.2, m, kTwoPi) == doctest::Approx(cauchy(0.2, 0.3, kTwoPi)).epsilon(1e-14));
  CHECK(communication_weight(kTwoPi - 0.2, m, kTwoPi) == doctest::Approx(cauchy(0.2, 0.3, kTwoPi)).epsilon(1e-12));
  m.beta = 4.0;
  CHECK(communication_weight(0.0, m, kTwoPi) == doctest::Approx(2.0 / (std::numbers::pi * 0.3)).epsilon(1e-14));
  ModelSpec bad;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("drift by direct summation") {
  ParticleEnsemble e = spread(3, kTwoPi, 1);
  ModelSpec cs;
  cs.kind = ModelKind::CuckerSmale;
  cs.epsilon = 0.7;
  for (int i = 0; i < 3; ++i) {
    double ref = 0.0;
    for (int j = 0; j < 3; ++j) ref += cauchy(e.x()[i] - e.x()[j], 0.7, kTwoPi) * (e.v()[j] - e.v()[i]);
    CHECK(drift(i, e, cs) == doctest::Approx(ref / 3.0).epsilon(1e-13));
  }

  ModelSpec mt;
  mt.epsilon = 0.7;
  for (int i = 0; i < 3; ++i) {
    double num = 0.0, den = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double w = cauchy(e.x()[i] - e.x()[j], 0.7, kTwoPi);
      num += w * e.v()[j];
      den += w;
    }
    CHECK(drift(i, e, mt) == doctest::Approx(num / den - e.v()[i]).epsilon(1e-13));
  }

  ParticleEnsemble two(2, kTwoPi, 0);
  two.x() << 0.1, 2.0;
  two.v() << -1.0, 3.0;
  ModelSpec flat;
  flat.epsilon = 1e6;
  const Eigen::VectorXd d = drift_direct(two, flat);
  CHECK(d[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(d[1] == doctest::Approx(-2.0).epsilon(1e-9));

  ParticleEnsemble same = spread(50, kTwoPi, 2);
  same.v().setConstant(0.4);
  CHECK(drift_direct(same, mt).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(drift_direct(spread(200, kTwoPi, 3), cs, 2).sum()) < 1e-12);
  CHECK_THROWS_AS(drift(5, e, mt), Error);
}

TEST_CASE("particle-mesh drift against direct summation") {
  const ParticleEnsemble e = spread(3000, kTwoPi, 4);
  for (ModelKind kind : {ModelKind::MotschTadmor, ModelKind::CuckerSmale}) {
    ModelSpec m;
    m.kind = kind;
    m.epsilon = 0.5;
    const Eigen::VectorXd direct = drift_direct(e, m, 2);
    const Eigen::VectorXd mesh = drift_mesh(e, m, 4096);
    CHECK((direct - mesh).cwiseAbs().maxCoeff() < 1e-3 * direct.cwiseAbs().maxCoeff());
    m.mesh_threshold = 100;
    m.mesh_points = 4096;
    CHECK((drift_all(e, m) - mesh).norm() == 0.0);
  }
}

TEST_CASE("Euler-Maruyama") {
  ModelSpec pure;
  pure.drift_enabled = false;
  ParticleEnsemble e(100000, kTwoPi, 5);
  for (int i = 0; i < e.size(); ++i) e.x()[i] = kTwoPi * i / e.size();
  for (int s = 0; s < 100; ++s) step_em(e, pure, 0.01);
  CHECK(e.time() == doctest::Approx(1.0));
  const double var = e.v().squaredNorm() / e.size() - e.mean_velocity() * e.mean_velocity();
  CHECK(var == doctest::Approx(2.0).epsilon(0.03));
  CHECK(e.x().minCoeff() >= 0.0);
  CHECK(e.x().maxCoeff() < kTwoPi);

  ModelSpec quiet;
  quiet.noise_amplitude = 0.0;
  ParticleEnsemble a = spread(64, kTwoPi, 6);
  a.v().setConstant(0.25);
  const Eigen::VectorXd x0 = a.x();
  step_em(a, quiet, 0.1);
  for (int i = 0; i < 64; ++i) CHECK(std::remainder(a.x()[i] - x0[i] - 0.025, kTwoPi) == doctest::Approx(0.0).scale(1.0));
  CHECK((a.v().array() - 0.25).abs().maxCoeff() < 1e-15);

  // Cucker-Smale without noise keeps the mean velocity
  ModelSpec cs;
  cs.kind = ModelKind::CuckerSmale;
  cs.noise_amplitude = 0.0;
  ParticleEnsemble b = spread(200, kTwoPi, 7);
  const double m0 = b.mean_velocity();
  for (int s = 0; s < 20; ++s) step_em(b, cs, 0.01);
  CHECK(b.mean_velocity() == doctest::Approx(m0).epsilon(1e-12));

  ParticleEnsemble c = spread(200, kTwoPi, 7), d = spread(200, kTwoPi, 7);
  ModelSpec mt;
  for (int s = 0; s < 5; ++s) step_em(c, mt, 0.01), step_em(d, mt, 0.01, 3);
  CHECK((c.v() - d.v()).norm() == 0.0);
}

TEST_CASE("empirical moments") {
  ParticleEnsemble e(800, kTwoPi, 0);
  for (int i = 0; i < 800; ++i) e.x()[i] = (i + 0.5) * kTwoPi / 800;
  e.v().setConstant(2.0);
  const Moments m = empirical_moments(e, 8);
  CHECK(m.dx() == doctest::Approx(kTwoPi / 8));
  for (int b = 0; b < 8; ++b) {
    CHECK(m.a_hat[b] == doctest::Approx(1.0 / kTwoPi));
    CHECK(m.b_hat[b] == doctest::Approx(2.0 / kTwoPi));
  }
  e.x().setConstant(2.5 * kTwoPi / 8);
  const Moments one = empirical_moments(e, 8);
  CHECK(one.a_hat[2] == doctest::Approx(8.0 / kTwoPi));
  CHECK(one.a_hat.sum() * one.dx() == doctest::Approx(1.0));
  CHECK(one.b_hat[2] * one.dx() == doctest::Approx(2.0));
}

TEST_CASE("kinetic moments and distances") {
  kinetic::SpectralField f(4, 4, kTwoPi);
  const Moments flat = kinetic_moments(f, 8);
  CHECK((flat.a_hat.array() - 1.0 / kTwoPi).abs().maxCoeff() < 1e-15);
  CHECK(flat.b_hat.cwiseAbs().maxCoeff() < 1e-15);

  // bin averages of cos x: (sin x1 - sin x0) / dx
  f.set_real_mode(1, 0, 0.05);  // a = 0.1 cos x
  const Moments wave = kinetic_moments(f, 8);
  const double dx = kTwoPi / 8;
  for (int b = 0; b < 8; ++b) {
    const double avg = 0.1 * (std::sin((b + 1) * dx) - std::sin(b * dx)) / dx;
    CHECK(wave.a_hat[b] == doctest::Approx((1.0 + avg) / kTwoPi).epsilon(1e-13));
  }
  CHECK(moment_distance(wave, wave) == 0.0);
  CHECK(moment_distance(wave, flat) == doctest::Approx((wave.a_hat - flat.a_hat).cwiseAbs().sum() * dx));

  Moments shifted = wave;
  shifted.t = 0.0;
  const std::vector<DistanceSample> d = compare_to_kinetic({shifted}, {f});
  CHECK(d[0].distance < 1e-15);
  kinetic::SpectralField other(4, 4, 3.0);
  CHECK_THROWS_AS(compare_to_kinetic({shifted}, {other}), Error);
  shifted.t = 0.5;
  try {
    compare_to_kinetic({shifted}, {f});
    FAIL("expected DomainMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DomainMismatch);
  }
}

TEST_CASE("sampling error of the equilibrium decays like N^-1/2") {
  const kinetic::SpectralField eq(2, 4, kTwoPi);
  std::vector<double> logn, logd;
  for (int n : {1000, 10000, 100000}) {
    double mean = 0.0;
    for (int r = 0; r < 8; ++r) {
      const ParticleEnsemble e = sample_shifted_maxwellian(n, kTwoPi, {}, {}, 17 + r);
      mean += moment_distance(empirical_moments(e, 8), kinetic_moments(eq, 8)) / 8.0;
    }
    logn.push_back(std::log(n));
    logd.push_back(std::log(mean));
  }
  const diag::LineFit fit = diag::fit_line(logn, logd);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("shifted Maxwellian sampling") {
  const ParticleEnsemble e = sample_shifted_maxwellian(200000, kTwoPi, {{1, 0.3, 0.0}}, {{0, 0.5, 0.0}}, 3);
  CHECK(e.mean_velocity() == doctest::Approx(0.5).epsilon(0.02));
  const Moments m = empirical_moments(e, 4);
  // bin averages of (1 + 0.3 cos x) / 2pi
  const double dx = kTwoPi / 4;
  for (int b = 0; b < 4; ++b) {
    const double avg = 1.0 + 0.3 * (std::sin((b + 1) * dx) - std::sin(b * dx)) / dx;
    CHECK(m.a_hat[b] == doctest::Approx(avg / kTwoPi).epsilon(0.02));
  }
  CHECK_THROWS_AS(sample_shifted_maxwellian(10, kTwoPi, {{1, 1.5, 0.0}}, {}, 0), Error);
}

TEST_CASE("particle runs") {
  ParticleRunConfig c;
  c.n_agents = 500;
  c.t_end = 0.5;
  c.sample_interval = 0.1;
  c.density = {{1, 0.1, 0.0}};
  int seen = 0;
  const ParticleRunResult r = run_particles(c, 9, 1, [&](const Moments&, const ParticleEnsemble&) { ++seen; });
  CHECK(r.steps == 50);
  CHECK(r.samples.size() == 6);
  CHECK(seen == 6);
  CHECK(r.samples.back().t == doctest::Approx(0.5));
  CHECK(r.final_state.time() == doctest::Approx(0.5));

  const ParticleRunResult again = run_particles(c, 9, 2);
  CHECK((again.final_state.x() - r.final_state.x()).norm() == 0.0);
  CHECK((again.final_state.v() - r.final_state.v()).norm() == 0.0);

  c.dt = 0.03;
  CHECK_THROWS_AS(run_particles(c, 9), Error);
}
