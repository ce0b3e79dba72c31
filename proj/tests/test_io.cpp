#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "kineticflock/error.hpp"
#include "kineticflock/io/config.hpp"
#include "kineticflock/io/ndjson.hpp"
#include "kineticflock/io/snapshot.hpp"
#include "kineticflock/particles/run.hpp"

using namespace kflock;
using io::Json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "kflock_test_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Config;
}

}  // namespace

TEST_CASE("solver config round trip") {
  kinetic::SolverConfig c;
  c.K = 12;
  c.dt = 5e-4;
  c.scheme = kinetic::TimeScheme::Ars222;
  c.kernel.mode = kinetic::AlignmentMode::Nonlocal;
  c.kernel.epsilon = 0.3;
  c.initial.kind = kinetic::InitialKind::ShiftedMaxwellian;
  c.initial.density = {{1, 0.1, 0.2}};
  c.weights.C = {0.5, 0.3};
  const Json j = io::to_json(c);
  kinetic::SolverConfig back;
  io::from_json(j, back);
  CHECK(io::to_json(back) == j);
  CHECK(back.K == 12);
  CHECK(back.scheme == kinetic::TimeScheme::Ars222);
  CHECK(back.initial.density[0].phase == 0.2);
}

TEST_CASE("strict parsing") {
  kinetic::SolverConfig c;
  CHECK(kind_of([&] { io::from_json(Json{{"K", 4}, {"typo", 1}}, c); }) == ErrorKind::Config);
  CHECK(kind_of([&] { io::from_json(Json{{"K", "four"}}, c); }) == ErrorKind::Config);
  CHECK(kind_of([&] { io::from_json(Json{{"initial", {{"kind", "gaussian"}}}}, c); }) == ErrorKind::Config);
  CHECK(kind_of([&] { io::from_json(Json{{"dt", -1.0}}, c); }) == ErrorKind::Config);
  c = {};
  try {
    io::from_json(Json{{"initial", {{"amplitud", 1.0}}}}, c);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("amplitud") != std::string::npos);
  }
  c = {};
  io::from_json(Json::object(), c);
  CHECK(c.K == kinetic::SolverConfig{}.K);

  particles::ParticleRunConfig p;
  io::from_json(Json{{"n_agents", 100}, {"model", {{"kind", "cucker_smale"}, {"epsilon", 0.2}}}}, p);
  CHECK(p.model.kind == particles::ModelKind::CuckerSmale);
  CHECK(kind_of([&] { io::from_json(Json{{"model", {{"kind", "vicsek"}}}}, p); }) == ErrorKind::Config);
}

TEST_CASE("manifest parsing") {
  const Json j = Json::parse(R"({"name": "m", "subcommand": "linear", "seed": 3,
                                 "config": {"task": "coercivity"}, "tolerances": {"tail": 1e-8}})");
  const io::ExperimentManifest m = io::parse_manifest(j);
  CHECK(m.name == "m");
  CHECK(m.seed == 3);
  CHECK(m.output == "out");
  CHECK(m.tolerances.at("tail") == 1e-8);
  CHECK(io::parse_manifest(io::to_json(m)) == m);
  CHECK(kind_of([&] { io::parse_manifest(Json{{"name", "x"}, {"subcommand", "dance"}}); }) == ErrorKind::Config);
  CHECK(kind_of([&] { io::parse_manifest(Json{{"subcommand", "fit"}}); }) == ErrorKind::Config);
  CHECK(kind_of([&] { io::load_manifest(scratch("missing.json").string()); }) == ErrorKind::Io);
  const auto bad = scratch("bad.json");
  std::ofstream(bad) << "{ not json";
  CHECK(kind_of([&] { io::load_manifest(bad.string()); }) == ErrorKind::Config);
}

TEST_CASE("NDJSON stream framing") {
  const auto path = scratch("stream.ndjson").string();
  {
    io::NdjsonWriter w(path, "demo", "simulate", 42);
    w.write("report", Json{{"t", 0.5}, {"hs", 1e-3}});
    w.close(true);
    CHECK_THROWS_AS(w.write("report", Json::object()), Error);
  }
  const auto recs = io::read_ndjson(path);
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].record == "header");
  CHECK(recs[0].body.at("schema_version") == io::kSchemaVersion);
  CHECK(recs[0].body.at("seed") == 42);
  CHECK(recs[1].body.at("hs") == 1e-3);
  CHECK(recs[2].record == "status");
  CHECK(recs[2].body.at("status") == "ok");

  const auto crash = scratch("crash.ndjson").string();
  { io::NdjsonWriter w(crash, "demo", "simulate", 1); }
  const auto tail = io::read_ndjson(crash);
  CHECK(tail.back().record == "status");
  CHECK(tail.back().body.at("status") == "error");

  const auto csv = scratch("series.csv").string();
  {
    io::CsvWriter w(csv, 7, {"t", "y"});
    w.row({0.1, 0.2});
    CHECK_THROWS_AS(w.row({1.0}), Error);
  }
  std::ifstream in(csv);
  std::string first;
  std::getline(in, first);
  CHECK(first == "# seed=7");
}

TEST_CASE("snapshot round trips") {
  kinetic::SpectralField f(3, 5, 2.5, 0.75);
  f.set_real_mode(2, 3, {0.125, -1e-300});
  f(0, 1) = 3.0;
  const auto path = scratch("field.bin").string();
  io::write_spectral_snapshot(path, f, 99);
  const io::SpectralSnapshot s = io::read_spectral_snapshot(path);
  CHECK(s.seed == 99);
  CHECK(s.field.time() == 0.75);
  CHECK(s.field.domain_length() == 2.5);
  CHECK((s.field.coeffs() - f.coeffs()).norm() == 0.0);
  CHECK(std::filesystem::file_size(path) == 16 + 4 + 4 + 4 + 8 + 8 + 8 + 7 * 5 * 16);

  particles::ParticleEnsemble e(4, 3.0, 11);
  e.x() << 0.1, 0.2, 0.3, 2.9;
  e.v() << -1, 0, 1, 2;
  e.set_time(1.5);
  const auto ppath = scratch("agents.bin").string();
  io::write_particle_snapshot(ppath, e);
  const io::ParticleSnapshot p = io::read_particle_snapshot(ppath);
  CHECK(p.seed == 11);
  CHECK(p.t == 1.5);
  CHECK(p.x[3] == 2.9);
  CHECK(p.v[0] == -1.0);

  CHECK(kind_of([&] { io::read_spectral_snapshot(ppath); }) == ErrorKind::Io);
}

TEST_CASE("report serialization") {
  diag::EnergyReport r;
  r.t = 1.0;
  r.hs = 2.0;
  r.A11 = 3.0;
  const Json j = io::to_json(r);
  CHECK(j.at("hs") == 2.0);
  CHECK(j.at("Aij").at("A11") == 3.0);
  CHECK(j.at("residual_mass").is_null());
}
