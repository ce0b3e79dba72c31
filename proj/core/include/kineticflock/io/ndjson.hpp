#pragma once

// Line-delimited JSON report channel. Every file opens with a header record
// carrying the schema version and seed and closes with a status record, also
// on failure, so a truncated run is distinguishable from a crashed one.

#include <cstdint>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include "kineticflock/io/config.hpp"

namespace kflock::io {

inline constexpr int kSchemaVersion = 1;

class NdjsonWriter {
 public:
  NdjsonWriter(const std::string& path, const std::string& name, const std::string& kind, std::uint64_t seed);
  ~NdjsonWriter();
  NdjsonWriter(const NdjsonWriter&) = delete;
  NdjsonWriter& operator=(const NdjsonWriter&) = delete;

  /// Appends a record; `record` is prepended as the "record" key.
  void write(const std::string& record, const Json& body);
  /// Terminal record. Further writes are rejected.
  void close(bool ok, const std::string& message = {}, const std::string& error_kind = {});
  bool closed() const { return closed_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
  std::mutex mutex_;
  bool closed_ = false;
};

struct NdjsonRecord {
  std::string record;
  Json body;
};

/// Parses every line; throws Config on malformed lines.
std::vector<NdjsonRecord> read_ndjson(const std::string& path);

/// Flat numeric series for plotting. The first line is "# seed=<seed>".
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::uint64_t seed, const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

/// Run metadata that is allowed to vary between identical runs (timestamps).
void write_sidecar(const std::string& path, const Json& extra);

}  // namespace kflock::io
