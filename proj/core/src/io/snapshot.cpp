#include "kineticflock/io/snapshot.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "kineticflock/error.hpp"

namespace kflock::io {

namespace {

using Magic = std::array<char, 16>;
constexpr Magic kSpectralMagic = {'K', 'F', 'L', 'O', 'C', 'K', '-', 'S', 'P', 'E', 'C', 'T', 'R', 'A', 'L', '\0'};
constexpr Magic kParticleMagic = {'K', 'F', 'L', 'O', 'C', 'K', '-', 'P', 'A', 'R', 'T', 'I', 'C', 'L', 'E', '\0'};

template <class T>
void put(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T take(std::ifstream& in, const std::string& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) fail(ErrorKind::Io, path + ": truncated snapshot");
  return value;
}

std::ofstream open_out(const std::string& path, const Magic& magic) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out.write(magic.data(), magic.size());
  put(out, kSnapshotVersion);
  return out;
}

std::ifstream open_in(const std::string& path, const Magic& magic) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  Magic got{};
  in.read(got.data(), got.size());
  if (!in || got != magic) fail(ErrorKind::Io, path + ": bad snapshot magic");
  const auto version = take<std::uint32_t>(in, path);
  if (version != kSnapshotVersion) fail(ErrorKind::Io, path + ": unsupported snapshot version " + std::to_string(version));
  return in;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) fail(ErrorKind::Io, path + ": write failed");
}

}  // namespace

void write_spectral_snapshot(const std::string& path, const kinetic::SpectralField& f, std::uint64_t seed) {
  std::ofstream out = open_out(path, kSpectralMagic);
  put(out, static_cast<std::int32_t>(f.K()));
  put(out, static_cast<std::int32_t>(f.n_modes()));
  put(out, f.domain_length());
  put(out, f.time());
  put(out, seed);
  for (int k = -f.K(); k <= f.K(); ++k) {
    for (int n = 0; n < f.n_modes(); ++n) {
      const kinetic::Complex c = f(k, n);
      put(out, c.real());
      put(out, c.imag());
    }
  }
  finish(out, path);
}

SpectralSnapshot read_spectral_snapshot(const std::string& path) {
  std::ifstream in = open_in(path, kSpectralMagic);
  const auto K = take<std::int32_t>(in, path);
  const auto n = take<std::int32_t>(in, path);
  const auto L = take<double>(in, path);
  const auto t = take<double>(in, path);
  const auto seed = take<std::uint64_t>(in, path);
  SpectralSnapshot snap{kinetic::SpectralField(K, n, L, t), seed};
  for (int k = -K; k <= K; ++k) {
    for (int m = 0; m < n; ++m) {
      const double re = take<double>(in, path);
      const double im = take<double>(in, path);
      snap.field(k, m) = kinetic::Complex(re, im);
    }
  }
  return snap;
}

void write_particle_snapshot(const std::string& path, const particles::ParticleEnsemble& e) {
  std::ofstream out = open_out(path, kParticleMagic);
  put(out, static_cast<std::uint64_t>(e.size()));
  put(out, e.domain_length());
  put(out, e.time());
  put(out, e.seed());
  out.write(reinterpret_cast<const char*>(e.x().data()), static_cast<std::streamsize>(e.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(e.v().data()), static_cast<std::streamsize>(e.size() * sizeof(double)));
  finish(out, path);
}

ParticleSnapshot read_particle_snapshot(const std::string& path) {
  std::ifstream in = open_in(path, kParticleMagic);
  ParticleSnapshot s;
  const auto n = take<std::uint64_t>(in, path);
  s.domain_length = take<double>(in, path);
  s.t = take<double>(in, path);
  s.seed = take<std::uint64_t>(in, path);
  s.x.resize(n);
  s.v.resize(n);
  in.read(reinterpret_cast<char*>(s.x.data()), static_cast<std::streamsize>(n * sizeof(double)));
  in.read(reinterpret_cast<char*>(s.v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) fail(ErrorKind::Io, path + ": truncated snapshot");
  return s;
}

}  // namespace kflock::io
