#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kineticflock/error.hpp"
#include "kineticflock/io/ndjson.hpp"
#include "kineticflock_cli/commands.hpp"

using namespace kflock;
using cli::Json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "kflock_test_cli" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

io::ExperimentManifest manifest(const std::string& name, const std::string& sub, Json config) {
  io::ExperimentManifest m;
  m.name = name;
  m.subcommand = sub;
  m.seed = 5;
  m.config = std::move(config);
  return m;
}

cli::CommandContext context(const std::filesystem::path& dir) {
  cli::CommandContext c;
  c.out_dir = dir;
  c.base_dir = dir;
  c.quiet = true;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json small_solver() {
  return Json{{"K", 4}, {"n_modes", 12}, {"dt", 0.001}, {"t_end", 0.05}, {"report_interval", 0.01},
              {"initial", {{"kind", "random"}, {"amplitude", 1e-3}}}};
}

}  // namespace

TEST_CASE("simulate with t_end = 0 writes one report") {
  const auto dir = scratch("zero");
  Json solver = small_solver();
  solver["t_end"] = 0.0;
  const cli::CommandOutcome out = cli::run_manifest(manifest("z", "simulate", {{"solver", solver}}), context(dir));
  CHECK(out.exit_code == cli::kOk);
  int reports = 0;
  for (const auto& r : io::read_ndjson(out.ndjson.string())) reports += r.record == "report" ? 1 : 0;
  CHECK(reports == 1);
  CHECK(std::filesystem::exists(dir / "z.config.json"));
  CHECK(std::filesystem::exists(dir / "z.meta.json"));
  CHECK(std::filesystem::exists(dir / "z.csv"));
}

TEST_CASE("simulate conserves mass and momentum and is reproducible") {
  const auto a = scratch("rep_a"), b = scratch("rep_b");
  const auto m = manifest("r", "simulate", {{"solver", small_solver()}});
  const cli::CommandOutcome first = cli::run_manifest(m, context(a));
  cli::CommandContext threaded = context(b);
  threaded.threads = 3;
  const cli::CommandOutcome second = cli::run_manifest(m, threaded);
  REQUIRE(first.exit_code == cli::kOk);
  REQUIRE(second.exit_code == cli::kOk);
  CHECK(slurp(a / "r.ndjson") == slurp(b / "r.ndjson"));
  CHECK(slurp(a / "r.csv") == slurp(b / "r.csv"));
  const Json* cons = cli::find_record(first, "conservation");
  REQUIRE(cons);
  CHECK(cons->at("mass_drift").get<double>() <= 1e-12);
  CHECK(cons->at("momentum_drift").get<double>() <= 1e-12);
  const Json* run = cli::find_record(first, "run");
  REQUIRE(run);
  CHECK(run->at("steps") == 50);
  CHECK(run->at("complete") == true);
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  Json solver = small_solver();
  solver["dt"] = 0.05;
  solver["t_end"] = 0.1;
  const cli::CommandOutcome cfl = cli::run_manifest(manifest("cfl", "simulate", {{"solver", solver}}), context(dir));
  CHECK(cfl.exit_code == cli::kRuntime);
  CHECK(cfl.error_kind == "CflViolation");
  const auto status = io::read_ndjson((dir / "cfl.ndjson").string()).back();
  CHECK(status.record == "status");
  CHECK(status.body.at("status") == "error");

  const cli::CommandOutcome typo = cli::run_manifest(manifest("typo", "simulate", {{"solvr", small_solver()}}), context(dir));
  CHECK(typo.exit_code == cli::kConfig);
  CHECK(typo.error_kind == "ConfigError");

  io::ExperimentManifest tol = manifest("tol", "simulate", {{"solver", small_solver()}});
  tol.tolerances["nonsense"] = 1.0;
  CHECK(cli::run_manifest(tol, context(dir)).exit_code == cli::kConfig);

  const cli::CommandOutcome fit = cli::run_manifest(manifest("nofile", "fit", {{"input", "missing.ndjson"}}), context(dir));
  CHECK(fit.exit_code == cli::kRuntime);
  CHECK(fit.error_kind == "IoError");
}

TEST_CASE("fit recovers a synthetic algebraic rate") {
  const auto dir = scratch("fit");
  {
    io::NdjsonWriter w((dir / "series.ndjson").string(), "series", "simulate", 0);
    for (int i = 0; i <= 100; ++i) {
      const double t = 0.5 * i;
      w.write("report", Json{{"t", t}, {"Aij", {{"A11", std::pow(1.0 + t, -0.25)}}}});
    }
    w.close(true);
  }
  const cli::CommandOutcome out = cli::run_manifest(
      manifest("f", "fit", {{"input", "series.ndjson"}, {"quantity", "Aij/A11"}, {"models", {"algebraic"}}}), context(dir));
  REQUIRE(out.exit_code == cli::kOk);
  const Json* fit = cli::find_record(out, "decay_fit");
  REQUIRE(fit);
  CHECK(fit->at("rate").get<double>() == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(fit->at("samples") == 101);

  const cli::CommandOutcome bad = cli::run_manifest(
      manifest("g", "fit", {{"input", "series.ndjson"}, {"models", {"logarithmic"}}}), context(dir));
  CHECK(bad.exit_code == cli::kConfig);
}

TEST_CASE("linear tasks") {
  const auto dir = scratch("linear");
  const cli::CommandOutcome op = cli::run_manifest(
      manifest("op", "linear", {{"task", "operator_check"}, {"n_max", 6}}), context(dir));
  REQUIRE(op.exit_code == cli::kOk);
  CHECK(cli::find_record(op, "operator_check")->at("max_rel_error").get<double>() < 1e-6);

  const cli::CommandOutcome co = cli::run_manifest(
      manifest("co", "linear", {{"task", "coercivity"}, {"n_modes", {8, 16}}}), context(dir));
  REQUIRE(co.exit_code == cli::kOk);
  CHECK(cli::find_record(co, "coercivity_summary")->at("min_lambda0").get<double>() > 0.0);

  const cli::CommandOutcome bad = cli::run_manifest(manifest("bad", "linear", {{"task", "teleport"}}), context(dir));
  CHECK(bad.exit_code == cli::kConfig);
}

TEST_CASE("particles and sweep") {
  const auto dir = scratch("sweep");
  const Json particles{{"n_agents", 200}, {"dt", 0.01}, {"t_end", 0.1},
                       {"density", {{{"m", 1}, {"amplitude", 0.1}, {"phase", 0.0}}}}};
  const Json sweep{{"workers", 2},
                   {"manifests",
                    {Json{{"name", "p1"}, {"subcommand", "particles"}, {"seed", 1}, {"config", {{"particles", particles}}}},
                     Json{{"name", "p2"}, {"subcommand", "particles"}, {"seed", 2}, {"config", {{"particles", particles}}}}}}};
  const cli::CommandOutcome out = cli::run_manifest(manifest("s", "sweep", sweep), context(dir));
  CHECK(out.exit_code == cli::kOk);
  CHECK(std::filesystem::exists(dir / "p1" / "p1.ndjson"));
  CHECK(std::filesystem::exists(dir / "p2" / "p2.csv"));

  const Json dup{{"manifests",
                  {Json{{"name", "p1"}, {"subcommand", "particles"}, {"config", {{"particles", particles}}}},
                   Json{{"name", "p1"}, {"subcommand", "particles"}, {"config", {{"particles", particles}}}}}}};
  CHECK(cli::run_manifest(manifest("d", "sweep", dup), context(dir)).exit_code == cli::kConfig);
}

TEST_CASE("compare rejects a mismatched kinetic domain") {
  const auto dir = scratch("compare");
  const Json cfg{{"kinetic", {{"K", 4}, {"n_modes", 12}, {"dt", 0.001}, {"domain_length", 3.0}}},
                 {"particles", {{"n_agents", 100}, {"dt", 0.01}, {"t_end", 0.02}}},
                 {"n_list", {100, 200}},
                 {"epsilon_list", {0.5}},
                 {"replicates", 1},
                 {"slope_epsilon", 0.5},
                 {"trend_n", 200}};
  const cli::CommandOutcome out = cli::run_manifest(manifest("c", "compare", cfg), context(dir));
  CHECK(out.exit_code == cli::kRuntime);
  CHECK(out.error_kind == "DomainMismatch");
}

TEST_CASE("thread resolution") {
  CHECK(cli::resolve_threads(4) == 4);
}
