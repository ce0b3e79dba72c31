#include "kineticflock/error.hpp"

namespace kflock {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Shape: return "ShapeError";
    case ErrorKind::DensityFloor: return "DensityFloor";
    case ErrorKind::CflViolation: return "CflViolation";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NonPositiveEnergy: return "NonPositiveEnergy";
    case ErrorKind::DegenerateSeries: return "DegenerateSeries";
    case ErrorKind::KappaTooLarge: return "KappaTooLarge";
    case ErrorKind::TailNotConverged: return "TailNotConverged";
    case ErrorKind::SourceNotMicro: return "SourceNotMicro";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::Io: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace kflock
