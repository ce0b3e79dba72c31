#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

#include "kineticflock/kinetic/initial_data.hpp"

namespace kflock::particles {

enum class ModelKind { CuckerSmale, MotschTadmor };

struct ModelSpec {
  ModelKind kind = ModelKind::MotschTadmor;
  double beta = 2.0;
  /// Unit diffusion in the kinetic equation corresponds to sqrt(2).
  double noise_amplitude = 1.4142135623730951;
  double epsilon = 1.0;
  bool drift_enabled = true;
  /// Ensembles larger than this use the particle-mesh drift.
  int mesh_threshold = 10000;
  /// Mesh points for the particle-mesh path; 0 picks a size resolving epsilon.
  int mesh_points = 0;
};

void validate(const ModelSpec& spec);

/// psi_eps(d) for a torus displacement d (minimal image taken here).
double communication_weight(double d, const ModelSpec& spec, double domain_length);

class ParticleEnsemble {
 public:
  ParticleEnsemble(int n, double domain_length, std::uint64_t seed);

  int size() const noexcept { return static_cast<int>(x_.size()); }
  double domain_length() const noexcept { return length_; }
  double time() const noexcept { return t_; }
  void set_time(double t) noexcept { t_ = t; }
  std::uint64_t seed() const noexcept { return seed_; }

  Eigen::VectorXd& x() noexcept { return x_; }
  const Eigen::VectorXd& x() const noexcept { return x_; }
  Eigen::VectorXd& v() noexcept { return v_; }
  const Eigen::VectorXd& v() const noexcept { return v_; }
  std::mt19937_64& rng() noexcept { return rng_; }

  void wrap_positions();
  double mean_velocity() const { return v_.mean(); }

 private:
  double length_;
  double t_ = 0.0;
  std::uint64_t seed_;
  Eigen::VectorXd x_;
  Eigen::VectorXd v_;
  std::mt19937_64 rng_;
};

/// Drift on one agent by direct summation.
double drift(int i, const ParticleEnsemble& ensemble, const ModelSpec& spec);
/// All drifts by O(N^2) summation.
Eigen::VectorXd drift_direct(const ParticleEnsemble& ensemble, const ModelSpec& spec, int threads = 1);
/// All drifts by cloud-in-cell deposit, FFT convolution with the sampled
/// kernel and cloud-in-cell interpolation.
Eigen::VectorXd drift_mesh(const ParticleEnsemble& ensemble, const ModelSpec& spec, int mesh_points);
/// Direct below the mesh threshold, particle-mesh above.
Eigen::VectorXd drift_all(const ParticleEnsemble& ensemble, const ModelSpec& spec, int threads = 1);

/// Euler-Maruyama: x += v dt (wrapped), v += drift dt + noise sqrt(dt) xi.
/// Noise is drawn in agent order from the ensemble generator.
void step_em(ParticleEnsemble& ensemble, const ModelSpec& spec, double dt, int threads = 1);

/// Agents sampled from F0 = (1 + a0(x)) M(v - u0(x)): x by rejection against
/// 1 + a0, v = u0(x) + N(0, 1).
ParticleEnsemble sample_shifted_maxwellian(int n, double domain_length, const std::vector<kinetic::CosineTerm>& density,
                                           const std::vector<kinetic::CosineTerm>& velocity, std::uint64_t seed);

}  // namespace kflock::particles
