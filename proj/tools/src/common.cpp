#include "common.hpp"

#include <cstdlib>
#include <set>

namespace kflock::cli {

namespace detail {

Artifacts::Artifacts(const io::ExperimentManifest& manifest, const CommandContext& context)
    : manifest_(manifest), context_(context) {
  std::error_code ec;
  std::filesystem::create_directories(context.out_dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create output directory '" + context.out_dir.string() + "': " + ec.message());
  {
    std::ofstream echo(path(".config.json"));
    if (!echo) fail(ErrorKind::Io, "output directory '" + context.out_dir.string() + "' is not writable");
    echo << io::to_json(manifest).dump(2) << '\n';
  }
  ndjson_ = std::make_unique<io::NdjsonWriter>(path(".ndjson").string(), manifest.name, manifest.subcommand,
                                               manifest.seed);
}

std::filesystem::path Artifacts::path(const std::string& suffix) const {
  return context_.out_dir / (manifest_.name + suffix);
}

void Artifacts::summary(CommandOutcome& outcome, const std::string& record, Json body) {
  ndjson_->write(record, body);
  Json entry{{"record", record}};
  for (auto it = body.begin(); it != body.end(); ++it) entry[it.key()] = it.value();
  outcome.summary.push_back(std::move(entry));
}

CommandOutcome& Artifacts::finish(CommandOutcome& outcome) {
  outcome.ndjson = path(".ndjson");
  if (!ndjson_->closed()) {
    ndjson_->close(outcome.exit_code == kOk, outcome.message, outcome.error_kind);
  }
  io::write_sidecar(path(".meta.json").string(), Json{{"name", manifest_.name},
                                                      {"subcommand", manifest_.subcommand},
                                                      {"seed", manifest_.seed},
                                                      {"threads", context_.threads},
                                                      {"exit_code", outcome.exit_code}});
  return outcome;
}

double tolerance(const io::ExperimentManifest& manifest, const std::string& key, double fallback) {
  const auto it = manifest.tolerances.find(key);
  return it == manifest.tolerances.end() ? fallback : it->second;
}

void check_tolerance_keys(const io::ExperimentManifest& manifest, std::initializer_list<const char*> known) {
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : manifest.tolerances) {
    if (!allowed.count(key)) fail(ErrorKind::Config, "manifest.tolerances: unknown key '" + key + "' for " + manifest.subcommand);
  }
}

int exit_code_for(ErrorKind kind) { return kind == ErrorKind::Config ? kConfig : kRuntime; }

}  // namespace detail

const Json* find_record(const CommandOutcome& outcome, const std::string& record) {
  for (const auto& r : outcome.summary) {
    if (r.value("record", std::string{}) == record) return &r;
  }
  return nullptr;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("KINETICFLOCK_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
    fail(ErrorKind::Config, std::string("KINETICFLOCK_THREADS must be a positive integer, got '") + env + "'");
  }
  return 1;
}

CommandOutcome run_manifest(const io::ExperimentManifest& manifest, const CommandContext& context) {
  try {
    if (manifest.subcommand == "simulate") return cmd_simulate(manifest, context);
    if (manifest.subcommand == "linear") return cmd_linear(manifest, context);
    if (manifest.subcommand == "particles") return cmd_particles(manifest, context);
    if (manifest.subcommand == "compare") return cmd_compare(manifest, context);
    if (manifest.subcommand == "fit") return cmd_fit(manifest, context);
    if (manifest.subcommand == "sweep") return cmd_sweep(manifest, context);
    fail(ErrorKind::Config, "unknown subcommand '" + manifest.subcommand + "'");
  } catch (const Error& e) {
    CommandOutcome out;
    out.exit_code = detail::exit_code_for(e.kind());
    out.error_kind = std::string(to_string(e.kind()));
    out.message = e.what();
    return out;
  } catch (const std::exception& e) {
    CommandOutcome out;
    out.exit_code = kRuntime;
    out.message = e.what();
    return out;
  }
}

}  // namespace kflock::cli
