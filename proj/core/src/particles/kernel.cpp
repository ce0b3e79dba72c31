#include <cmath>

#include "kineticflock/error.hpp"
#include "kineticflock/kinetic/alignment.hpp"
#include "kineticflock/particles/ensemble.hpp"

namespace kflock::particles {

void validate(const ModelSpec& spec) {
  if (!(spec.beta > 0.0)) fail(ErrorKind::Config, "kernel beta must be positive");
  if (!(spec.noise_amplitude >= 0.0)) fail(ErrorKind::Config, "noise amplitude must be >= 0");
  if (!(spec.epsilon > 0.0)) fail(ErrorKind::Config, "kernel epsilon must be positive");
  if (spec.mesh_threshold < 2) fail(ErrorKind::Config, "mesh threshold must be >= 2");
  if (spec.mesh_points < 0) fail(ErrorKind::Config, "mesh_points must be >= 0");
}

double communication_weight(double d, const ModelSpec& spec, double domain_length) {
  d = std::remainder(d, domain_length);  // minimal image in [-L/2, L/2]
  const double z = d / spec.epsilon;
  const double profile = spec.beta == 2.0 ? 1.0 / (1.0 + z * z) : kinetic::kernel_profile(z, spec.beta);
  // Below beta = 1 the profile is not integrable; keep the 1/eps scaling only.
  const double norm = spec.beta > 1.0 ? kinetic::kernel_l1_norm(spec.beta) : 1.0;
  return profile / (spec.epsilon * norm);
}

}  // namespace kflock::particles
