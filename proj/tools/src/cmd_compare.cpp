#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "common.hpp"
#include "kineticflock/diagnostics/decay_fit.hpp"
#include "kineticflock/kinetic/run.hpp"
#include "kineticflock/particles/run.hpp"
#include "kineticflock/util/parallel.hpp"

namespace kflock::cli {

namespace {

struct ComparePayload {
  kinetic::SolverConfig kinetic;
  particles::ParticleRunConfig particles;
  std::vector<int> n_list{1000, 10000, 100000};
  std::vector<double> epsilon_list{0.5, 0.25};
  int replicates = 1;
  /// Kernel width whose N sweep gives the sampling slope.
  double slope_epsilon = 0.25;
  /// Agent count at which distances are compared across kernel widths.
  int trend_n = 100000;
};

ComparePayload parse_payload(const io::ExperimentManifest& m) {
  io::ObjectReader r(m.config, "manifest.config");
  ComparePayload p;
  if (const Json* k = r.child("kinetic")) {
    if (k->contains("initial")) {
      fail(ErrorKind::Config, "manifest.config.kinetic.initial: kinetic data is taken from particles.density/velocity");
    }
    io::from_json(*k, p.kinetic, "manifest.config.kinetic");
  }
  if (const Json* q = r.child("particles")) io::from_json(*q, p.particles, "manifest.config.particles");
  r.get("n_list", p.n_list);
  r.get("epsilon_list", p.epsilon_list);
  r.get("replicates", p.replicates);
  r.get("slope_epsilon", p.slope_epsilon);
  r.get("trend_n", p.trend_n);
  r.finish();
  if (p.n_list.size() < 2) fail(ErrorKind::Config, "manifest.config.n_list needs at least two agent counts");
  if (p.epsilon_list.empty()) fail(ErrorKind::Config, "manifest.config.epsilon_list must be non-empty");
  if (p.replicates < 1) fail(ErrorKind::Config, "manifest.config.replicates must be >= 1");
  if (std::find(p.epsilon_list.begin(), p.epsilon_list.end(), p.slope_epsilon) == p.epsilon_list.end()) {
    fail(ErrorKind::Config, "manifest.config.slope_epsilon must be one of epsilon_list");
  }
  if (std::find(p.n_list.begin(), p.n_list.end(), p.trend_n) == p.n_list.end()) {
    fail(ErrorKind::Config, "manifest.config.trend_n must be one of n_list");
  }

  // The kinetic reference starts from the same law and stops at the same time.
  const bool kinetic_domain_set = m.config.contains("kinetic") && m.config.at("kinetic").contains("domain_length");
  if (kinetic_domain_set && p.kinetic.domain_length != p.particles.domain_length) {
    fail(ErrorKind::DomainMismatch, "kinetic and particle domain lengths differ");
  }
  p.kinetic.domain_length = p.particles.domain_length;
  p.kinetic.t_end = p.particles.t_end;
  p.kinetic.report_interval = p.particles.t_end;
  p.kinetic.initial = kinetic::InitialDataSpec{};
  p.kinetic.initial.kind = kinetic::InitialKind::ShiftedMaxwellian;
  p.kinetic.initial.density = p.particles.density;
  p.kinetic.initial.velocity = p.particles.velocity;
  p.kinetic.kernel.mode = kinetic::AlignmentMode::Local;
  p.kinetic.seed = m.seed;
  p.particles.sample_interval = 0.0;
  kinetic::validate(p.kinetic);
  return p;
}

}  // namespace

CommandOutcome cmd_compare(const io::ExperimentManifest& manifest, const CommandContext& context) {
  detail::check_tolerance_keys(manifest, {});
  const ComparePayload payload = parse_payload(manifest);

  return detail::with_artifacts(manifest, context, [&](detail::Artifacts& art, CommandOutcome& out) {
    kinetic::SolverConfig kc = payload.kinetic;
    kc.threads = context.threads;
    const kinetic::RunResult reference = kinetic::run(kc);
    if (!reference.complete) fail(*reference.error_kind, "kinetic reference run: " + reference.error_message);
    art.ndjson().write("kinetic_reference", Json{{"t", reference.final_field.time()},
                                                 {"steps", reference.steps},
                                                 {"closure_flux", reference.reports.back().closure_flux}});

    io::CsvWriter csv(art.path(".csv").string(), manifest.seed, {"epsilon", "n_agents", "distance", "std_error"});
    // mean distance per (epsilon, N)
    std::map<double, std::map<int, double>> mean_distance;
    for (double eps : payload.epsilon_list) {
      for (int n : payload.n_list) {
        particles::ParticleRunConfig pc = payload.particles;
        pc.n_agents = n;
        pc.model.epsilon = eps;
        // Replicate r uses seed + r at every (epsilon, N): common random numbers.
        std::vector<particles::DistanceSample> samples(static_cast<std::size_t>(payload.replicates));
        parallel_for(payload.replicates, context.threads, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
          for (std::ptrdiff_t rep = lo; rep < hi; ++rep) {
            const auto run = particles::run_particles(pc, manifest.seed + static_cast<std::uint64_t>(rep));
            samples[static_cast<std::size_t>(rep)] =
                particles::compare_to_kinetic({run.samples.back()}, {reference.final_field}, 1e-9).front();
          }
        });
        double sum = 0.0, sum_sq = 0.0, rho = 0.0, mom = 0.0;
        for (std::size_t rep = 0; rep < samples.size(); ++rep) {
          const auto& s = samples[rep];
          art.ndjson().write("distance", Json{{"epsilon", eps},
                                              {"n_agents", n},
                                              {"replicate", rep},
                                              {"distance", s.distance},
                                              {"density_part", s.density_part},
                                              {"momentum_part", s.momentum_part}});
          sum += s.distance;
          sum_sq += s.distance * s.distance;
          rho += s.density_part;
          mom += s.momentum_part;
        }
        const double R = static_cast<double>(samples.size());
        const double mean = sum / R;
        const double var = R > 1 ? std::max(0.0, (sum_sq - R * mean * mean) / (R - 1.0)) : 0.0;
        const double se = std::sqrt(var / R);
        mean_distance[eps][n] = mean;
        art.summary(out, "mean_distance", Json{{"epsilon", eps},
                                               {"n_agents", n},
                                               {"distance", mean},
                                               {"std_error", se},
                                               {"density_part", rho / R},
                                               {"momentum_part", mom / R},
                                               {"replicates", samples.size()}});
        csv.row({eps, static_cast<double>(n), mean, se});
      }
    }

    std::vector<double> log_n, log_d;
    for (int n : payload.n_list) {
      log_n.push_back(std::log(static_cast<double>(n)));
      log_d.push_back(std::log(mean_distance[payload.slope_epsilon][n]));
    }
    const diag::LineFit line = diag::fit_line(log_n, log_d);
    art.summary(out, "sampling_slope", Json{{"epsilon", payload.slope_epsilon},
                                            {"slope", line.slope},
                                            {"intercept", line.intercept},
                                            {"r_squared", line.r_squared}});

    std::vector<double> eps_sorted = payload.epsilon_list;
    std::sort(eps_sorted.begin(), eps_sorted.end(), std::greater<>());
    std::vector<double> trend;
    bool non_increasing = true;
    for (double eps : eps_sorted) {
      trend.push_back(mean_distance[eps][payload.trend_n]);
      if (trend.size() > 1 && trend.back() > trend[trend.size() - 2]) non_increasing = false;
    }
    art.summary(out, "epsilon_trend", Json{{"n_agents", payload.trend_n},
                                           {"epsilon", eps_sorted},
                                           {"distance", trend},
                                           {"non_increasing", non_increasing}});
  });
}

}  // namespace kflock::cli
