#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kineticflock/diagnostics/functionals.hpp"
#include "kineticflock/error.hpp"
#include "kineticflock/kinetic/solver.hpp"

namespace kflock::kinetic {

/// Callbacks invoked from the stepping thread, in time order.
struct RunObserver {
  std::function<void(const diag::EnergyReport&)> on_report;
  std::function<void(const SpectralField&)> on_snapshot;
  std::function<void(const std::string&)> on_warning;
};

struct RunResult {
  std::vector<diag::EnergyReport> reports;
  SpectralField final_field;
  long steps = 0;
  bool complete = true;
  std::optional<ErrorKind> error_kind;
  std::string error_message;
  std::vector<std::string> warnings;
};

/// Number of steps of size dt reaching t_end; t_end must be a multiple of dt.
long step_count(const SolverConfig& config);

/// Integrates from the configured initial data. Configuration and stability
/// preconditions throw before the first step; errors raised while stepping end
/// the run early with complete = false and the reports gathered so far.
RunResult run(const SolverConfig& config, const RunObserver& observer = {});
RunResult run_from(const SolverConfig& config, SpectralField initial, const RunObserver& observer = {});

}  // namespace kflock::kinetic
