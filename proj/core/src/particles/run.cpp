#include "kineticflock/particles/run.hpp"

#include <cmath>
#include <string>

#include "kineticflock/error.hpp"

namespace kflock::particles {

void validate(const ParticleRunConfig& c) {
  if (c.n_agents < 2) fail(ErrorKind::Config, "particle run needs at least two agents");
  if (!(c.domain_length > 0.0)) fail(ErrorKind::Config, "domain_length must be positive");
  if (!(c.dt > 0.0) || !(c.t_end >= 0.0)) fail(ErrorKind::Config, "particle run needs dt > 0 and t_end >= 0");
  if (c.n_bins < 1) fail(ErrorKind::Config, "n_bins must be >= 1");
  if (c.sample_interval < 0.0) fail(ErrorKind::Config, "sample_interval must be >= 0");
  validate(c.model);
}

namespace {

long steps_for(double span, double dt, const char* what) {
  const double ratio = span / dt;
  const long n = std::lround(ratio);
  if (std::abs(ratio - static_cast<double>(n)) > 1e-6) {
    fail(ErrorKind::Config, std::string(what) + " = " + std::to_string(span) + " is not a multiple of dt = " + std::to_string(dt));
  }
  return n;
}

}  // namespace

ParticleRunResult run_particles(const ParticleRunConfig& config, std::uint64_t seed, int threads,
                                const std::function<void(const Moments&, const ParticleEnsemble&)>& on_sample) {
  validate(config);
  const long n_steps = steps_for(config.t_end, config.dt, "t_end");
  const long every = config.sample_interval > 0.0 ? steps_for(config.sample_interval, config.dt, "sample_interval") : 0;

  ParticleRunResult result{{}, sample_shifted_maxwellian(config.n_agents, config.domain_length, config.density,
                                                         config.velocity, seed),
                           0};
  ParticleEnsemble& e = result.final_state;
  auto sample = [&] {
    result.samples.push_back(empirical_moments(e, config.n_bins));
    if (on_sample) on_sample(result.samples.back(), e);
  };
  sample();
  for (long step = 1; step <= n_steps; ++step) {
    step_em(e, config.model, config.dt, threads);
    // time from the step count, so sample times match the kinetic reports exactly
    e.set_time(static_cast<double>(step) * config.dt);
    if (step == n_steps || (every > 0 && step % every == 0)) sample();
  }
  result.steps = n_steps;
  return result;
}

}  // namespace kflock::particles
