#pragma once

// JSON schema for every configurable type. Parsing is strict: unknown keys
// and wrongly typed values raise ErrorKind::Config naming the offending path.
// Missing keys keep their defaults; to_json always writes every key, so an
// echoed config re-parses to the same value.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <string>

#include "kineticflock/diagnostics/functionals.hpp"
#include "kineticflock/hypo/semigroup.hpp"
#include "kineticflock/kinetic/solver.hpp"
#include "kineticflock/particles/ensemble.hpp"
#include "kineticflock/particles/run.hpp"

namespace kflock::io {

using Json = nlohmann::ordered_json;

/// Reads keys from a JSON object while tracking which ones were consumed.
class ObjectReader {
 public:
  ObjectReader(const Json& object, std::string path);

  template <class T>
  void get(const char* key, T& out);
  bool has(const char* key) const { return object_.contains(key); }
  const Json* child(const char* key);
  std::string path(const char* key) const { return path_ + "." + key; }

  /// Throws on keys that were never read.
  void finish() const;

 private:
  const Json& object_;
  std::string path_;
  std::map<std::string, bool> seen_;
};

template <class T>
void ObjectReader::get(const char* key, T& out) {
  seen_[key] = true;
  if (!object_.contains(key)) return;
  try {
    out = object_.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Config, path(key) + ": " + e.what());
  }
}

Json to_json(const kinetic::InitialDataSpec& spec);
Json to_json(const kinetic::AlignmentKernel& kernel);
Json to_json(const diag::EnergyWeights& weights);
Json to_json(const kinetic::SolverConfig& config);
Json to_json(const particles::ModelSpec& spec);
Json to_json(const particles::ParticleRunConfig& config);
Json to_json(const hypo::WavenumberQuadrature& quad);
Json to_json(const hypo::SemigroupConfig& config);
Json to_json(const diag::EnergyReport& report);

void from_json(const Json& j, kinetic::InitialDataSpec& spec, const std::string& path = "initial");
void from_json(const Json& j, kinetic::AlignmentKernel& kernel, const std::string& path = "kernel");
void from_json(const Json& j, diag::EnergyWeights& weights, const std::string& path = "weights");
void from_json(const Json& j, kinetic::SolverConfig& config, const std::string& path = "config");
void from_json(const Json& j, particles::ModelSpec& spec, const std::string& path = "model");
void from_json(const Json& j, particles::ParticleRunConfig& config, const std::string& path = "particles");
void from_json(const Json& j, hypo::WavenumberQuadrature& quad, const std::string& path = "quadrature");
void from_json(const Json& j, hypo::SemigroupConfig& config, const std::string& path = "config");

std::string to_string(kinetic::InitialKind kind);
std::string to_string(kinetic::AlignmentMode mode);
std::string to_string(kinetic::TimeScheme scheme);
std::string to_string(particles::ModelKind kind);

/// One experiment: which subcommand to run, on what payload, with which seed.
struct ExperimentManifest {
  std::string name;
  std::string subcommand;
  std::uint64_t seed = 0;
  std::string output = "out";
  Json config = Json::object();
  std::map<std::string, double> tolerances;

  bool operator==(const ExperimentManifest& other) const;
};

Json to_json(const ExperimentManifest& manifest);
ExperimentManifest parse_manifest(const Json& j);
ExperimentManifest load_manifest(const std::string& path);
Json load_json_file(const std::string& path);

}  // namespace kflock::io
