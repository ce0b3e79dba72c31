#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "kineticflock/particles/ensemble.hpp"
#include "kineticflock/particles/moments.hpp"

namespace kflock::particles {

struct ParticleRunConfig {
  int n_agents = 10000;
  double domain_length = 6.283185307179586;
  double dt = 0.01;
  double t_end = 1.0;
  ModelSpec model;
  /// Initial law (1 + a0(x)) M(v - u0(x)).
  std::vector<kinetic::CosineTerm> density;
  std::vector<kinetic::CosineTerm> velocity;
  int n_bins = 8;
  /// Time between moment samples; 0 samples only the start and the end.
  double sample_interval = 0.0;
};

void validate(const ParticleRunConfig& config);

struct ParticleRunResult {
  std::vector<Moments> samples;
  ParticleEnsemble final_state;
  long steps = 0;
};

/// Samples the initial ensemble and integrates it with Euler-Maruyama; moment
/// histograms go to `on_sample` as they are taken.
ParticleRunResult run_particles(const ParticleRunConfig& config, std::uint64_t seed, int threads = 1,
                                const std::function<void(const Moments&, const ParticleEnsemble&)>& on_sample = {});

}  // namespace kflock::particles
