#include <cmath>

#include "common.hpp"
#include "kineticflock/io/snapshot.hpp"
#include "kineticflock/particles/run.hpp"

namespace kflock::cli {

namespace {

Json moments_json(const particles::Moments& m) {
  return Json{{"t", m.t},
              {"n_bins", m.a_hat.size()},
              {"a_hat", std::vector<double>(m.a_hat.begin(), m.a_hat.end())},
              {"b_hat", std::vector<double>(m.b_hat.begin(), m.b_hat.end())}};
}

}  // namespace

CommandOutcome cmd_particles(const io::ExperimentManifest& manifest, const CommandContext& context) {
  detail::check_tolerance_keys(manifest, {});
  io::ObjectReader r(manifest.config, "manifest.config");
  particles::ParticleRunConfig config;
  bool snapshot = false;
  if (const Json* p = r.child("particles")) io::from_json(*p, config, "manifest.config.particles");
  r.get("snapshot", snapshot);
  r.finish();

  return detail::with_artifacts(manifest, context, [&](detail::Artifacts& art, CommandOutcome& out) {
    io::CsvWriter csv(art.path(".csv").string(), manifest.seed, {"t", "mean_velocity", "velocity_variance"});
    double v_initial = 0.0;
    bool first = true;
    const auto result = particles::run_particles(
        config, manifest.seed, context.threads, [&](const particles::Moments& m, const particles::ParticleEnsemble& e) {
          const double mean = e.mean_velocity();
          const double var = (e.v().array() - mean).square().mean();
          if (first) v_initial = mean;
          first = false;
          Json body = moments_json(m);
          body["mean_velocity"] = mean;
          body["velocity_variance"] = var;
          art.ndjson().write("moments", body);
          csv.row({m.t, mean, var});
        });
    if (snapshot) io::write_particle_snapshot(art.path(".particles.bin").string(), result.final_state);
    art.summary(out, "run", Json{{"steps", result.steps},
                                 {"n_agents", config.n_agents},
                                 {"t_final", result.final_state.time()},
                                 {"mean_velocity_initial", v_initial},
                                 {"mean_velocity_final", result.final_state.mean_velocity()}});
  });
}

}  // namespace kflock::cli
