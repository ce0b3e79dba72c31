#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "kineticflock/error.hpp"
#include "kineticflock/io/ndjson.hpp"
#include "kineticflock_cli/commands.hpp"

namespace kflock::cli::detail {

/// Output files of one experiment: <out>/<name>.{ndjson,csv,meta.json,config.json}.
class Artifacts {
 public:
  Artifacts(const io::ExperimentManifest& manifest, const CommandContext& context);

  std::filesystem::path path(const std::string& suffix) const;
  io::NdjsonWriter& ndjson() { return *ndjson_; }
  /// Appends a summary record to both the stream and the outcome.
  void summary(CommandOutcome& outcome, const std::string& record, Json body);
  /// Status record and sidecar; returns the outcome for convenience.
  CommandOutcome& finish(CommandOutcome& outcome);

 private:
  const io::ExperimentManifest& manifest_;
  const CommandContext& context_;
  std::unique_ptr<io::NdjsonWriter> ndjson_;
};

/// manifest.tolerances[key] if present, else the fallback. Rejects keys that
/// are not in `known`.
double tolerance(const io::ExperimentManifest& manifest, const std::string& key, double fallback);
void check_tolerance_keys(const io::ExperimentManifest& manifest, std::initializer_list<const char*> known);

int exit_code_for(ErrorKind kind);

/// Opens the artifacts, runs body(artifacts, outcome) and always closes the
/// stream with a status record; library errors become the outcome.
template <class Body>
CommandOutcome with_artifacts(const io::ExperimentManifest& manifest, const CommandContext& context, Body&& body) {
  Artifacts artifacts(manifest, context);
  CommandOutcome outcome;
  try {
    body(artifacts, outcome);
  } catch (const Error& e) {
    outcome.exit_code = exit_code_for(e.kind());
    outcome.error_kind = std::string(to_string(e.kind()));
    outcome.message = e.what();
  } catch (const std::exception& e) {
    outcome.exit_code = kRuntime;
    outcome.error_kind = "Runtime";
    outcome.message = e.what();
  }
  artifacts.finish(outcome);
  return outcome;
}

}  // namespace kflock::cli::detail
