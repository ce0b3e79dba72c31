#pragma once

// Binary snapshots, host byte order (little-endian on every supported target).
//
// Spectral: 16-byte magic "KFLOCK-SPECTRAL\0", u32 version, i32 K, i32 N_v,
// f64 L_x, f64 t, u64 seed, then (2K+1) * N_v complex coefficients as (re, im)
// pairs, wavenumber-major (all Hermite modes of k = -K first).
//
// Particles: magic "KFLOCK-PARTICLE\0", u32 version, u64 N, f64 L, f64 t,
// u64 seed, then N positions and N velocities.

#include <cstdint>
#include <string>
#include <vector>

#include "kineticflock/kinetic/spectral_field.hpp"
#include "kineticflock/particles/ensemble.hpp"

namespace kflock::io {

inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_spectral_snapshot(const std::string& path, const kinetic::SpectralField& f, std::uint64_t seed);

struct SpectralSnapshot {
  kinetic::SpectralField field;
  std::uint64_t seed = 0;
};
SpectralSnapshot read_spectral_snapshot(const std::string& path);

void write_particle_snapshot(const std::string& path, const particles::ParticleEnsemble& ensemble);

struct ParticleSnapshot {
  double domain_length = 0.0;
  double t = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> x, v;
};
ParticleSnapshot read_particle_snapshot(const std::string& path);

}  // namespace kflock::io
