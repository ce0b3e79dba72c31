#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <utility>

#include "kineticflock/error.hpp"
#include "kineticflock/io/config.hpp"
#include "kineticflock_cli/commands.hpp"

using namespace kflock;

int main(int argc, char** argv) {
  CLI::App app{"kinetic flocking solver, hypocoercivity lab and particle simulator", "kineticflock"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out_dir;
  bool quiet = false;

  const std::pair<const char*, const char*> commands[] = {
      {"simulate", "nonlinear torus run with energy reports and decay fits"},
      {"linear", "linearized analysis: operator check, coercivity, semigroup and mode decay"},
      {"particles", "noisy Motsch-Tadmor / Cucker-Smale particle run"},
      {"compare", "particle ensembles against the kinetic solution"},
      {"fit", "decay fits on an existing NDJSON series"},
      {"sweep", "run a list of manifests"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "experiment manifest (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override the manifest seed");
    sub->add_option("--threads", threads, "worker threads (default: KINETICFLOCK_THREADS or 1)")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "output directory (default: manifest output)");
    sub->add_flag("--quiet", quiet, "do not print summary records");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kConfig;
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();

  auto report_error = [](const std::string& kind, const std::string& message) {
    std::cerr << io::Json{{"status", "error"}, {"error_kind", kind}, {"message", message}}.dump() << '\n';
  };

  io::ExperimentManifest manifest;
  cli::CommandContext context;
  try {
    manifest = io::load_manifest(config_path);
    if (manifest.subcommand != subcommand) {
      fail(ErrorKind::Config, "manifest is for '" + manifest.subcommand + "', invoked as '" + subcommand + "'");
    }
    if (seed) manifest.seed = *seed;
    if (!out_dir.empty()) manifest.output = out_dir;
    context.out_dir = manifest.output;
    context.base_dir = std::filesystem::path(config_path).parent_path();
    if (context.base_dir.empty()) context.base_dir = ".";
    context.threads = cli::resolve_threads(threads);
    context.quiet = quiet;
  } catch (const Error& e) {
    report_error(std::string(to_string(e.kind())), e.what());
    return e.kind() == ErrorKind::Config ? cli::kConfig : cli::kRuntime;
  }

  const cli::CommandOutcome outcome = cli::run_manifest(manifest, context);
  if (!quiet) {
    for (const auto& record : outcome.summary) std::cout << record.dump() << '\n';
  }
  if (outcome.exit_code != cli::kOk) report_error(outcome.error_kind.empty() ? "Runtime" : outcome.error_kind, outcome.message);
  return outcome.exit_code;
}
