#include "kineticflock/particles/ensemble.hpp"

#include <cmath>
#include <numbers>

#include "kineticflock/error.hpp"
#include "kineticflock/kinetic/alignment.hpp"
#include "kineticflock/kinetic/collocation.hpp"
#include "kineticflock/util/parallel.hpp"

namespace kflock::particles {

namespace {

struct PairSums {
  double S = 0.0;  // sum_k psi(x_i - x_k)
  double B = 0.0;  // sum_k psi(x_i - x_k) v_k
};

// Hot loop: unnormalized profile with the minimal image by one conditional shift.
PairSums pair_sums(int i, const ParticleEnsemble& e, const ModelSpec& spec) {
  const double length = e.domain_length();
  const double half = 0.5 * length;
  const double inv_eps = 1.0 / spec.epsilon;
  const double xi = e.x()[i];
  const double* x = e.x().data();
  const double* v = e.v().data();
  const int n = e.size();
  PairSums s;
  if (spec.beta == 2.0) {
    for (int k = 0; k < n; ++k) {
      double d = xi - x[k];
      if (d > half) d -= length;
      else if (d < -half) d += length;
      const double z = d * inv_eps;
      const double w = 1.0 / (1.0 + z * z);
      s.S += w;
      s.B += w * v[k];
    }
  } else {
    for (int k = 0; k < n; ++k) {
      double d = xi - x[k];
      if (d > half) d -= length;
      else if (d < -half) d += length;
      const double w = kinetic::kernel_profile(d * inv_eps, spec.beta);
      s.S += w;
      s.B += w * v[k];
    }
  }
  const double scale = communication_weight(0.0, spec, length);  // psi_eps(0) / profile(0)
  s.S *= scale;
  s.B *= scale;
  return s;
}

double drift_from_sums(const PairSums& s, double vi, int n, ModelKind kind) {
  if (kind == ModelKind::MotschTadmor) return s.B / s.S - vi;
  return (s.B - vi * s.S) / static_cast<double>(n);
}

int default_mesh_points(const ModelSpec& spec, double length) {
  // About 64 cells per kernel width, at least 1024.
  const int wanted = static_cast<int>(std::ceil(64.0 * length / spec.epsilon));
  return kinetic::next_power_of_two(std::clamp(wanted, 1024, 1 << 16));
}

}  // namespace

ParticleEnsemble::ParticleEnsemble(int n, double domain_length, std::uint64_t seed)
    : length_(domain_length), seed_(seed), x_(Eigen::VectorXd::Zero(std::max(n, 0))),
      v_(Eigen::VectorXd::Zero(std::max(n, 0))), rng_(seed) {
  if (n < 2) fail(ErrorKind::Config, "ensemble needs N >= 2 agents");
  if (!(domain_length > 0.0)) fail(ErrorKind::Config, "domain length must be positive");
}

void ParticleEnsemble::wrap_positions() {
  for (Eigen::Index i = 0; i < x_.size(); ++i) {
    double y = std::fmod(x_[i], length_);
    if (y < 0.0) y += length_;
    if (y >= length_) y = 0.0;  // fmod of a tiny negative can round up to L
    x_[i] = y;
  }
}

double drift(int i, const ParticleEnsemble& ensemble, const ModelSpec& spec) {
  if (i < 0 || i >= ensemble.size()) fail(ErrorKind::Shape, "agent index out of range");
  return drift_from_sums(pair_sums(i, ensemble, spec), ensemble.v()[i], ensemble.size(), spec.kind);
}

Eigen::VectorXd drift_direct(const ParticleEnsemble& ensemble, const ModelSpec& spec, int threads) {
  Eigen::VectorXd out(ensemble.size());
  parallel_for(ensemble.size(), threads, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    for (std::ptrdiff_t i = lo; i < hi; ++i) {
      out[i] = drift_from_sums(pair_sums(static_cast<int>(i), ensemble, spec), ensemble.v()[i], ensemble.size(),
                               spec.kind);
    }
  });
  return out;
}

Eigen::VectorXd drift_mesh(const ParticleEnsemble& ensemble, const ModelSpec& spec, int mesh_points) {
  if (mesh_points < 4) fail(ErrorKind::Config, "particle mesh needs >= 4 points");
  const int m = mesh_points;
  const int n = ensemble.size();
  const double length = ensemble.domain_length();
  const double h = length / m;

  std::vector<int> cell(static_cast<std::size_t>(n));
  std::vector<double> frac(static_cast<std::size_t>(n));
  Eigen::VectorXd rho = Eigen::VectorXd::Zero(m), mom = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < n; ++i) {
    const double s = ensemble.x()[i] / h;
    int j = static_cast<int>(std::floor(s));
    const double f = s - j;
    j = ((j % m) + m) % m;
    cell[static_cast<std::size_t>(i)] = j;
    frac[static_cast<std::size_t>(i)] = f;
    const int j1 = (j + 1) % m;
    rho[j] += 1.0 - f;
    rho[j1] += f;
    mom[j] += (1.0 - f) * ensemble.v()[i];
    mom[j1] += f * ensemble.v()[i];
  }
  Eigen::VectorXd kernel(m);
  for (int j = 0; j < m; ++j) kernel[j] = communication_weight(j * h, spec, length);
  const Eigen::VectorXd S = kinetic::circular_convolution(kernel, rho);
  const Eigen::VectorXd B = kinetic::circular_convolution(kernel, mom);

  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    const int j = cell[static_cast<std::size_t>(i)];
    const int j1 = (j + 1) % m;
    const double f = frac[static_cast<std::size_t>(i)];
    PairSums s;
    s.S = (1.0 - f) * S[j] + f * S[j1];
    s.B = (1.0 - f) * B[j] + f * B[j1];
    out[i] = drift_from_sums(s, ensemble.v()[i], n, spec.kind);
  }
  return out;
}

Eigen::VectorXd drift_all(const ParticleEnsemble& ensemble, const ModelSpec& spec, int threads) {
  if (ensemble.size() > spec.mesh_threshold) {
    const int m = spec.mesh_points > 0 ? spec.mesh_points : default_mesh_points(spec, ensemble.domain_length());
    return drift_mesh(ensemble, spec, m);
  }
  return drift_direct(ensemble, spec, threads);
}

void step_em(ParticleEnsemble& ensemble, const ModelSpec& spec, double dt, int threads) {
  if (!(dt > 0.0)) fail(ErrorKind::Config, "dt must be positive");
  const Eigen::VectorXd a = spec.drift_enabled ? drift_all(ensemble, spec, threads)
                                               : Eigen::VectorXd::Zero(ensemble.size()).eval();
  std::normal_distribution<double> normal;
  const double sigma = spec.noise_amplitude * std::sqrt(dt);
  Eigen::VectorXd& x = ensemble.x();
  Eigen::VectorXd& v = ensemble.v();
  for (int i = 0; i < ensemble.size(); ++i) {
    x[i] += v[i] * dt;
    const double xi = spec.noise_amplitude > 0.0 ? normal(ensemble.rng()) : 0.0;
    v[i] += a[i] * dt + sigma * xi;
  }
  ensemble.wrap_positions();
  ensemble.set_time(ensemble.time() + dt);
}

ParticleEnsemble sample_shifted_maxwellian(int n, double domain_length, const std::vector<kinetic::CosineTerm>& density,
                                           const std::vector<kinetic::CosineTerm>& velocity, std::uint64_t seed) {
  ParticleEnsemble e(n, domain_length, seed);
  auto profile = [&](const std::vector<kinetic::CosineTerm>& terms, double x) {
    double s = 0.0;
    for (const auto& t : terms) s += t.amplitude * std::cos(2.0 * std::numbers::pi * t.m * x / domain_length + t.phase);
    return s;
  };
  double bound = 1.0;
  for (const auto& t : density) bound += std::abs(t.amplitude);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal;
  for (int i = 0; i < n; ++i) {
    double x = 0.0;
    for (;;) {
      x = domain_length * uniform(e.rng());
      const double rho = 1.0 + profile(density, x);
      if (rho <= 0.0) fail(ErrorKind::Config, "density profile 1 + a0 must stay positive");
      if (uniform(e.rng()) * bound <= rho) break;
    }
    e.x()[i] = x;
    e.v()[i] = profile(velocity, x) + normal(e.rng());
  }
  e.wrap_positions();
  return e;
}

}  // namespace kflock::particles
