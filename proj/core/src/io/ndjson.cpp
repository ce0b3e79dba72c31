#include "kineticflock/io/ndjson.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "kineticflock/error.hpp"

namespace kflock::io {

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

NdjsonWriter::NdjsonWriter(const std::string& path, const std::string& name, const std::string& kind,
                           std::uint64_t seed)
    : path_(path), out_(open_output(path)) {
  write("header", Json{{"schema_version", kSchemaVersion}, {"name", name}, {"kind", kind}, {"seed", seed}});
}

NdjsonWriter::~NdjsonWriter() {
  if (!closed_) {
    try {
      close(false, "writer destroyed without a status record", "Io");
    } catch (...) {
    }
  }
}

void NdjsonWriter::write(const std::string& record, const Json& body) {
  std::lock_guard lock(mutex_);
  if (closed_) fail(ErrorKind::Io, path_ + ": write after status record");
  Json line{{"record", record}};
  for (auto it = body.begin(); it != body.end(); ++it) line[it.key()] = it.value();
  out_ << line.dump() << '\n';
  out_.flush();
  if (!out_) fail(ErrorKind::Io, path_ + ": write failed");
}

void NdjsonWriter::close(bool ok, const std::string& message, const std::string& error_kind) {
  Json body{{"status", ok ? "ok" : "error"}};
  if (!error_kind.empty()) body["error_kind"] = error_kind;
  if (!message.empty()) body["message"] = message;
  write("status", body);
  std::lock_guard lock(mutex_);
  closed_ = true;
  out_.close();
}

std::vector<NdjsonRecord> read_ndjson(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  std::vector<NdjsonRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::Config, path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.is_object()) fail(ErrorKind::Config, path + ":" + std::to_string(lineno) + ": expected an object");
    NdjsonRecord r;
    r.record = j.value("record", std::string{});
    j.erase("record");
    r.body = std::move(j);
    out.push_back(std::move(r));
  }
  return out;
}

CsvWriter::CsvWriter(const std::string& path, std::uint64_t seed, const std::vector<std::string>& columns)
    : out_(open_output(path)), columns_(columns.size()) {
  out_ << "# seed=" << seed << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
  out_ << std::setprecision(17);
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) fail(ErrorKind::Shape, "csv row width does not match the header");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << values[i];
  out_ << '\n';
  out_.flush();
}

void write_sidecar(const std::string& path, const Json& extra) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream stamp;
  stamp << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  Json j{{"written_at", stamp.str()}};
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  std::ofstream out = open_output(path);
  out << j.dump(2) << '\n';
}

}  // namespace kflock::io
