#include <cmath>
#include <cstdio>
#include <vector>

#include "common.hpp"
#include "kineticflock/diagnostics/decay_fit.hpp"
#include "kineticflock/diagnostics/monitors.hpp"
#include "kineticflock/io/snapshot.hpp"
#include "kineticflock/kinetic/run.hpp"

namespace kflock::cli {

namespace {

struct FitRequest {
  std::string quantity = "hs";
  diag::DecayModel model = diag::DecayModel::Exponential;
  double t0 = 0.0;
  double t1 = -1.0;
};

struct SimulatePayload {
  kinetic::SolverConfig solver;
  std::vector<FitRequest> fits;
  bool dissipation = false;
  double dissipation_after = 1.0;
  /// Extra runs at dt/2, dt/4, ... for the balance residual ratio.
  int refinement_levels = 0;
};

FitRequest parse_fit(const Json& j, const std::string& path) {
  io::ObjectReader r(j, path);
  FitRequest f;
  std::string model = diag::to_string(f.model);
  r.get("quantity", f.quantity);
  r.get("model", model);
  r.get("t0", f.t0);
  r.get("t1", f.t1);
  r.finish();
  try {
    f.model = diag::decay_model_from_string(model);
  } catch (const Error& e) {
    fail(ErrorKind::Config, path + ".model: " + e.what());
  }
  return f;
}

SimulatePayload parse_payload(const io::ExperimentManifest& m, int threads) {
  io::ObjectReader r(m.config, "manifest.config");
  SimulatePayload p;
  if (const Json* s = r.child("solver")) io::from_json(*s, p.solver, "manifest.config.solver");
  if (const Json* fits = r.child("fits")) {
    if (!fits->is_array()) fail(ErrorKind::Config, "manifest.config.fits: expected an array");
    for (std::size_t i = 0; i < fits->size(); ++i) {
      p.fits.push_back(parse_fit((*fits)[i], "manifest.config.fits[" + std::to_string(i) + "]"));
    }
  }
  if (const Json* d = r.child("dissipation")) {
    io::ObjectReader dr(*d, "manifest.config.dissipation");
    p.dissipation = true;
    dr.get("t_after", p.dissipation_after);
    dr.finish();
  }
  r.get("refinement_levels", p.refinement_levels);
  r.finish();
  if (p.refinement_levels < 0) fail(ErrorKind::Config, "manifest.config.refinement_levels must be >= 0");
  p.solver.seed = m.seed;
  p.solver.threads = threads;
  return p;
}

double lookup(const Json& report, const std::string& quantity) {
  const Json& v = report.at(Json::json_pointer("/" + quantity));
  if (!v.is_number()) fail(ErrorKind::Config, "report field '" + quantity + "' is not numeric");
  return v.get<double>();
}

Json range_json(const std::vector<double>& values) {
  double lo = INFINITY, hi = -INFINITY;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return Json{{"min", lo}, {"max", hi}, {"count", values.size()}};
}

}  // namespace

CommandOutcome cmd_simulate(const io::ExperimentManifest& manifest, const CommandContext& context) {
  detail::check_tolerance_keys(manifest, {"energy_inequality", "energy_fraction"});
  const SimulatePayload payload = parse_payload(manifest, context.threads);
  const double energy_tol = detail::tolerance(manifest, "energy_inequality", 1e-10);
  const double energy_fraction = detail::tolerance(manifest, "energy_fraction", 0.95);

  return detail::with_artifacts(manifest, context, [&](detail::Artifacts& art, CommandOutcome& out) {
    io::CsvWriter csv(art.path(".csv").string(), manifest.seed,
                      {"t", "l2", "hs", "mass", "momentum", "E_total", "D_total", "min_density"});
    int snapshot_index = 0;
    kinetic::RunObserver observer;
    observer.on_report = [&](const diag::EnergyReport& e) {
      art.ndjson().write("report", io::to_json(e));
      csv.row({e.t, e.l2, e.hs, e.mass, e.momentum, e.E_total, e.D_total, e.min_density});
    };
    observer.on_snapshot = [&](const kinetic::SpectralField& f) {
      char suffix[32];
      std::snprintf(suffix, sizeof suffix, ".snap%05d.bin", snapshot_index++);
      io::write_spectral_snapshot(art.path(suffix).string(), f, manifest.seed);
    };
    observer.on_warning = [&](const std::string& w) { art.ndjson().write("warning", Json{{"message", w}}); };

    const kinetic::RunResult result = kinetic::run(payload.solver, observer);

    art.summary(out, "run", Json{{"steps", result.steps},
                                 {"complete", result.complete},
                                 {"reports", result.reports.size()},
                                 {"t_final", result.final_field.time()}});
    if (!result.complete) {
      out.exit_code = kRuntime;
      out.error_kind = result.error_kind ? std::string(to_string(*result.error_kind)) : "Runtime";
      out.message = result.error_message;
      return;
    }

    const auto& first = result.reports.front();
    const auto& last = result.reports.back();
    auto drift = [](double a, double b) { return std::abs(a) > 0.0 ? std::abs(b - a) / std::abs(a) : std::abs(b - a); };
    art.summary(out, "conservation", Json{{"mass_initial", first.mass},
                                          {"mass_final", last.mass},
                                          {"mass_drift", drift(first.mass, last.mass)},
                                          {"momentum_initial", first.momentum},
                                          {"momentum_final", last.momentum},
                                          {"momentum_drift", drift(first.momentum, last.momentum)}});

    if (!payload.fits.empty()) {
      std::vector<Json> reports;
      for (const auto& e : result.reports) reports.push_back(io::to_json(e));
      for (const auto& req : payload.fits) {
        std::vector<double> t, y;
        for (const auto& j : reports) {
          t.push_back(j.at("t").get<double>());
          y.push_back(lookup(j, req.quantity));
        }
        const diag::DecayFit fit = diag::fit_decay(t, y, req.model, req.t0, req.t1);
        art.summary(out, "decay_fit", Json{{"quantity", req.quantity},
                                           {"model", diag::to_string(fit.model)},
                                           {"rate", fit.rate},
                                           {"log_slope", -fit.rate},
                                           {"log_prefactor", fit.log_prefactor},
                                           {"r_squared", fit.r_squared},
                                           {"t0", fit.t0},
                                           {"t1", fit.t1},
                                           {"samples", fit.samples}});
      }
    }

    if (payload.dissipation) {
      const diag::DissipationFit d =
          diag::fit_dissipation_constant(result.reports, payload.dissipation_after, energy_tol, energy_fraction);
      art.summary(out, "dissipation_fit", Json{{"C5", d.C5},
                                               {"fraction", d.fraction},
                                               {"steps", d.steps},
                                               {"hopeless", d.hopeless},
                                               {"t_after", payload.dissipation_after},
                                               {"tolerance", energy_tol},
                                               {"required_fraction", energy_fraction}});
    }

    // Residual ratios: same run at dt / 2^j, compared at the shared report times.
    std::vector<diag::EnergyReport> coarse = result.reports;
    double dt = payload.solver.dt;
    for (int level = 1; level <= payload.refinement_levels; ++level) {
      kinetic::SolverConfig fine_config = payload.solver;
      fine_config.dt = dt / 2.0;
      fine_config.snapshot_interval = 0.0;
      const kinetic::RunResult fine = kinetic::run(fine_config);
      if (!fine.complete) fail(*fine.error_kind, "refinement run at dt=" + std::to_string(fine_config.dt) + ": " + fine.error_message);
      std::vector<double> mass, momentum, aij;
      for (const auto& c : coarse) {
        if (!c.has_residuals) continue;
        for (const auto& f : fine.reports) {
          if (f.has_residuals && std::abs(f.t - c.t) <= 1e-9 * std::max(1.0, c.t)) {
            mass.push_back(c.residual_mass / f.residual_mass);
            momentum.push_back(c.residual_momentum / f.residual_momentum);
            aij.push_back(c.residual_A11 / f.residual_A11);
            break;
          }
        }
      }
      if (mass.empty()) fail(ErrorKind::DegenerateSeries, "refinement runs share no report times");
      art.summary(out, "residual_ratio", Json{{"dt_coarse", dt},
                                              {"dt_fine", fine_config.dt},
                                              {"mass", range_json(mass)},
                                              {"momentum", range_json(momentum)},
                                              {"Aij", range_json(aij)}});
      coarse = fine.reports;
      dt = fine_config.dt;
    }
  });
}

}  // namespace kflock::cli
