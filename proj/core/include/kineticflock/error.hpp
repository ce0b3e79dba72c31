#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kflock {

enum class ErrorKind {
  Config,
  Shape,
  DensityFloor,
  CflViolation,
  NonFinite,
  NonPositiveEnergy,
  DegenerateSeries,
  KappaTooLarge,
  TailNotConverged,
  SourceNotMicro,
  DomainMismatch,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so the
/// command line front end can map it to an exit code and a structured record.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace kflock
