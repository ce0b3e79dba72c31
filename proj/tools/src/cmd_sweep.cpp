#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

#include "common.hpp"

namespace kflock::cli {

namespace {

struct Entry {
  io::ExperimentManifest manifest;
  std::filesystem::path base_dir;
};

}  // namespace

CommandOutcome cmd_sweep(const io::ExperimentManifest& manifest, const CommandContext& context) {
  detail::check_tolerance_keys(manifest, {});
  io::ObjectReader r(manifest.config, "manifest.config");
  int workers = 1;
  r.get("workers", workers);
  const Json* list = r.child("manifests");
  r.finish();
  if (!list || !list->is_array() || list->empty()) fail(ErrorKind::Config, "manifest.config.manifests must be a non-empty array");
  if (workers < 1) fail(ErrorKind::Config, "manifest.config.workers must be >= 1");

  std::vector<Entry> entries;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const Json& item = (*list)[i];
    if (item.is_string()) {
      std::filesystem::path p = item.get<std::string>();
      if (p.is_relative()) p = context.base_dir / p;
      entries.push_back({io::load_manifest(p.string()), p.parent_path()});
    } else {
      entries.push_back({io::parse_manifest(item), context.base_dir});
    }
    if (entries.back().manifest.subcommand == "sweep") fail(ErrorKind::Config, "sweeps do not nest");
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (entries[i].manifest.name == entries[j].manifest.name) {
        fail(ErrorKind::Config, "duplicate experiment name '" + entries[i].manifest.name + "' in sweep");
      }
    }
  }

  return detail::with_artifacts(manifest, context, [&](detail::Artifacts& art, CommandOutcome& out) {
    std::vector<CommandOutcome> results(entries.size());
    const int pool = std::min<int>(workers, static_cast<int>(entries.size()));
    const int per_child = std::max(1, context.threads / pool);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < entries.size(); i = next++) {
        CommandContext child = context;
        child.out_dir = context.out_dir / entries[i].manifest.name;
        child.base_dir = entries[i].base_dir;
        child.threads = per_child;
        results[i] = run_manifest(entries[i].manifest, child);
      }
    };
    std::vector<std::thread> threads;
    for (int w = 1; w < pool; ++w) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();

    int worst = kOk;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      art.summary(out, "experiment", Json{{"name", entries[i].manifest.name},
                                          {"subcommand", entries[i].manifest.subcommand},
                                          {"exit_code", results[i].exit_code},
                                          {"message", results[i].message},
                                          {"summary", results[i].summary}});
      if (results[i].exit_code == kConfig) worst = kConfig;
      else if (results[i].exit_code == kRuntime && worst == kOk) worst = kRuntime;
    }
    out.exit_code = worst;
    if (worst != kOk) out.message = "one or more experiments failed";
  });
}

}  // namespace kflock::cli
