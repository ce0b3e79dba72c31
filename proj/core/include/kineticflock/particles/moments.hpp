#pragma once

#include <Eigen/Dense>

#include <vector>

#include "kineticflock/kinetic/spectral_field.hpp"
#include "kineticflock/particles/ensemble.hpp"

namespace kflock::particles {

/// Mass-weighted histograms: sum a_hat dx = 1, sum b_hat dx = mean velocity.
struct Moments {
  double t = 0.0;
  double domain_length = 0.0;
  Eigen::VectorXd a_hat;
  Eigen::VectorXd b_hat;
  double dx() const { return domain_length / static_cast<double>(a_hat.size()); }
};

Moments empirical_moments(const ParticleEnsemble& ensemble, int n_bins);

/// Bin averages of the kinetic density (1+a)/int(1+a) and momentum b/int(1+a),
/// the normalization that matches the empirical histograms.
Moments kinetic_moments(const kinetic::SpectralField& f, int n_bins);

/// sum |a1 - a2| dx + sum |b1 - b2| dx.
double moment_distance(const Moments& lhs, const Moments& rhs);

struct DistanceSample {
  double t = 0.0;
  double distance = 0.0;
  double density_part = 0.0;
  double momentum_part = 0.0;
};

/// L^1 distance per matched time; throws DomainMismatch on differing domains,
/// bin counts or times.
std::vector<DistanceSample> compare_to_kinetic(const std::vector<Moments>& empirical,
                                               const std::vector<kinetic::SpectralField>& kinetic,
                                               double time_tolerance = 1e-9);

}  // namespace kflock::particles
