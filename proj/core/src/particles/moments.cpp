#include "kineticflock/particles/moments.hpp"

#include <algorithm>
#include <cmath>

#include "kineticflock/error.hpp"

namespace kflock::particles {

Moments empirical_moments(const ParticleEnsemble& ensemble, int n_bins) {
  if (n_bins < 1) fail(ErrorKind::Config, "n_bins must be >= 1");
  Moments m;
  m.t = ensemble.time();
  m.domain_length = ensemble.domain_length();
  m.a_hat = Eigen::VectorXd::Zero(n_bins);
  m.b_hat = Eigen::VectorXd::Zero(n_bins);
  const double dx = m.dx();
  for (int i = 0; i < ensemble.size(); ++i) {
    int bin = static_cast<int>(ensemble.x()[i] / dx);
    bin = std::clamp(bin, 0, n_bins - 1);
    m.a_hat[bin] += 1.0;
    m.b_hat[bin] += ensemble.v()[i];
  }
  const double scale = 1.0 / (ensemble.size() * dx);
  m.a_hat *= scale;
  m.b_hat *= scale;
  return m;
}

Moments kinetic_moments(const kinetic::SpectralField& f, int n_bins) {
  if (n_bins < 1) fail(ErrorKind::Config, "n_bins must be >= 1");
  if (f.n_modes() < 2) fail(ErrorKind::Shape, "kinetic field needs Hermite modes 0 and 1");
  Moments m;
  m.t = f.time();
  m.domain_length = f.domain_length();
  m.a_hat = Eigen::VectorXd::Zero(n_bins);
  m.b_hat = Eigen::VectorXd::Zero(n_bins);
  const double dx = m.dx();
  const double total_mass = f.domain_length() * (1.0 + f(0, 0).real());
  if (!(total_mass > 0.0)) fail(ErrorKind::DensityFloor, "kinetic total mass is not positive");
  for (int bin = 0; bin < n_bins; ++bin) {
    const double x0 = bin * dx;
    double a = 1.0, b = 0.0;
    for (int k = -f.K(); k <= f.K(); ++k) {
      const double kk = f.wavenumber(k);
      // average of exp(i k x) over the bin
      const kinetic::Complex avg =
          k == 0 ? kinetic::Complex(1.0, 0.0)
                 : (std::exp(kinetic::Complex(0.0, kk * (x0 + dx))) - std::exp(kinetic::Complex(0.0, kk * x0))) /
                       kinetic::Complex(0.0, kk * dx);
      a += (f(k, 0) * avg).real();
      b += (f(k, 1) * avg).real();
    }
    m.a_hat[bin] = a / total_mass;
    m.b_hat[bin] = b / total_mass;
  }
  return m;
}

double moment_distance(const Moments& lhs, const Moments& rhs) {
  if (lhs.a_hat.size() != rhs.a_hat.size() || lhs.domain_length != rhs.domain_length) {
    fail(ErrorKind::DomainMismatch, "histograms differ in bins or domain");
  }
  return lhs.dx() * ((lhs.a_hat - rhs.a_hat).lpNorm<1>() + (lhs.b_hat - rhs.b_hat).lpNorm<1>());
}

std::vector<DistanceSample> compare_to_kinetic(const std::vector<Moments>& empirical,
                                               const std::vector<kinetic::SpectralField>& kinetic,
                                               double time_tolerance) {
  if (empirical.size() != kinetic.size()) {
    fail(ErrorKind::DomainMismatch, "particle and kinetic series have different lengths");
  }
  std::vector<DistanceSample> out;
  out.reserve(empirical.size());
  for (std::size_t i = 0; i < empirical.size(); ++i) {
    const Moments& e = empirical[i];
    if (std::abs(e.domain_length - kinetic[i].domain_length()) > 1e-12 * e.domain_length) {
      fail(ErrorKind::DomainMismatch, "particle domain " + std::to_string(e.domain_length) +
                                          " differs from kinetic domain " + std::to_string(kinetic[i].domain_length()));
    }
    if (std::abs(e.t - kinetic[i].time()) > time_tolerance) {
      fail(ErrorKind::DomainMismatch, "sample times differ: " + std::to_string(e.t) + " vs " +
                                          std::to_string(kinetic[i].time()));
    }
    const Moments k = kinetic_moments(kinetic[i], static_cast<int>(e.a_hat.size()));
    DistanceSample s;
    s.t = e.t;
    s.density_part = e.dx() * (e.a_hat - k.a_hat).lpNorm<1>();
    s.momentum_part = e.dx() * (e.b_hat - k.b_hat).lpNorm<1>();
    s.distance = s.density_part + s.momentum_part;
    out.push_back(s);
  }
  return out;
}

}  // namespace kflock::particles
