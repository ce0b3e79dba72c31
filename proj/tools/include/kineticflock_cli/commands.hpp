#pragma once

// Subcommand drivers. Each one runs a single experiment described by a
// manifest, writes its artifacts under the output directory and returns the
// exit status together with the summary records it emitted.

#include <filesystem>
#include <string>

#include "kineticflock/io/config.hpp"

namespace kflock::cli {

using io::Json;

enum ExitCode : int { kOk = 0, kRuntime = 1, kConfig = 2 };

struct CommandContext {
  std::filesystem::path out_dir = "out";
  /// Directory that relative paths inside the manifest are resolved against.
  std::filesystem::path base_dir = ".";
  int threads = 1;
  bool quiet = false;
};

struct CommandOutcome {
  int exit_code = kOk;
  std::string message;
  /// Library error kind name when the run failed.
  std::string error_kind;
  /// Summary records, also appended to the NDJSON stream.
  Json summary = Json::array();
  std::filesystem::path ndjson;
};

/// Dispatches on manifest.subcommand. Never throws: schema errors map to
/// exit 2 and runtime errors to exit 1, with the message in the outcome.
CommandOutcome run_manifest(const io::ExperimentManifest& manifest, const CommandContext& context);

CommandOutcome cmd_simulate(const io::ExperimentManifest& manifest, const CommandContext& context);
CommandOutcome cmd_linear(const io::ExperimentManifest& manifest, const CommandContext& context);
CommandOutcome cmd_particles(const io::ExperimentManifest& manifest, const CommandContext& context);
CommandOutcome cmd_compare(const io::ExperimentManifest& manifest, const CommandContext& context);
CommandOutcome cmd_fit(const io::ExperimentManifest& manifest, const CommandContext& context);
CommandOutcome cmd_sweep(const io::ExperimentManifest& manifest, const CommandContext& context);

/// First summary record with the given "record" value, or null.
const Json* find_record(const CommandOutcome& outcome, const std::string& record);

/// --threads, then KINETICFLOCK_THREADS, then 1.
int resolve_threads(int requested);

}  // namespace kflock::cli
