#include "kineticflock/kinetic/run.hpp"

#include <cmath>

namespace kflock::kinetic {

namespace {

long cadence(double interval, double dt) {
  if (interval <= 0.0) return 1;
  return std::max(1L, std::lround(interval / dt));
}

}  // namespace

long step_count(const SolverConfig& config) {
  const double ratio = config.t_end / config.dt;
  const long n = std::lround(ratio);
  if (std::abs(ratio - static_cast<double>(n)) > 1e-6) {
    fail(ErrorKind::Config, "t_end = " + std::to_string(config.t_end) + " is not a multiple of dt = " +
                                std::to_string(config.dt));
  }
  return n;
}

RunResult run(const SolverConfig& config, const RunObserver& observer) {
  validate(config);
  SpectralField initial = make_initial_field(config.initial, config.K, config.n_modes, config.domain_length,
                                             config.sobolev_order, config.seed);
  return run_from(config, std::move(initial), observer);
}

RunResult run_from(const SolverConfig& config, SpectralField initial, const RunObserver& observer) {
  const Solver solver(config);
  const long n_steps = step_count(config);
  if (n_steps > 0) solver.check_stability(config.dt);
  if (!initial.same_layout(solver.make_field())) {
    fail(ErrorKind::Shape, "initial field layout does not match the configuration");
  }

  RunResult result;
  auto warn = [&](const std::string& message) {
    result.warnings.push_back(message);
    if (observer.on_warning) observer.on_warning(message);
  };
  const double min_rel = min_relative_phase_density(initial, solver.grid());
  if (min_rel < 0.0) {
    warn("initial F0 = M + sqrt(M) f0 is negative at a quadrature node (min F0/M = " + std::to_string(min_rel) +
         ")");
  }

  const long report_every = cadence(config.report_interval, config.dt);
  const long snapshot_every = config.snapshot_interval > 0.0 ? cadence(config.snapshot_interval, config.dt) : 0;
  const int s = config.sobolev_order;

  auto emit = [&](const SpectralField& f, const SpectralField* previous) {
    diag::EnergyReport report = diag::make_report(f, solver.grid(), s, config.weights, previous, config.density_floor);
    report.closure_flux = solver.closure_flux(f);
    if (observer.on_report) observer.on_report(report);
    result.reports.push_back(report);
  };

  SpectralField current = std::move(initial);
  current.set_time(0.0);
  bool positivity_warned = min_rel < 0.0;
  try {
    emit(current, nullptr);
    if (snapshot_every > 0 && observer.on_snapshot) observer.on_snapshot(current);
    for (long n = 1; n <= n_steps; ++n) {
      SpectralField next = solver.step(current, config.dt);
      next.set_time(static_cast<double>(n) * config.dt);
      result.steps = n;
      if (n % report_every == 0 || n == n_steps) emit(next, &current);
      if (snapshot_every > 0 && observer.on_snapshot && (n % snapshot_every == 0 || n == n_steps)) {
        observer.on_snapshot(next);
      }
      if (!positivity_warned && n % report_every == 0 && min_relative_phase_density(next, solver.grid()) < 0.0) {
        warn("F = M + sqrt(M) f became negative at a quadrature node near t = " + std::to_string(next.time()));
        positivity_warned = true;
      }
      current = std::move(next);
    }
  } catch (const Error& e) {
    result.complete = false;
    result.error_kind = e.kind();
    result.error_message = e.what();
  }
  result.final_field = std::move(current);
  return result;
}

}  // namespace kflock::kinetic
