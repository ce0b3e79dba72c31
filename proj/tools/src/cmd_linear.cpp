#include <cmath>
#include <optional>
#include <vector>

#include "common.hpp"
#include "kineticflock/hypo/linear_mode.hpp"
#include "kineticflock/hypo/semigroup.hpp"
#include "kineticflock/spectral/coercivity.hpp"
#include "kineticflock/spectral/operator_check.hpp"

namespace kflock::cli {

namespace {

void operator_check(const Json& cfg, detail::Artifacts& art, CommandOutcome& out) {
  io::ObjectReader r(cfg, "manifest.config");
  std::string task;
  int n_max = 10, points = 4096;
  double v_max = 10.0;
  r.get("task", task);
  r.get("n_max", n_max);
  r.get("points", points);
  r.get("v_max", v_max);
  r.finish();
  const spectral::OperatorCheck check = spectral::check_L_against_finite_differences(n_max, points, v_max);
  art.summary(out, "operator_check", Json{{"n_max", n_max},
                                          {"points", points},
                                          {"v_max", v_max},
                                          {"rel_error", check.rel_error},
                                          {"max_rel_error", check.max_rel_error}});
}

void coercivity(const Json& cfg, detail::Artifacts& art, CommandOutcome& out) {
  io::ObjectReader r(cfg, "manifest.config");
  std::string task;
  std::vector<int> n_modes{16, 32, 64};
  r.get("task", task);
  r.get("n_modes", n_modes);
  r.finish();
  std::vector<double> lambdas;
  for (int n : n_modes) {
    const spectral::BasisShape shape(n, 1);
    const double lambda0 = spectral::coercivity_lambda0(shape);
    const spectral::CoercivityFit with_b = spectral::fit_coercivity_with_b(shape);
    art.summary(out, "coercivity", Json{{"n_modes", n},
                                        {"lambda0", lambda0},
                                        {"lambda_with_b", with_b.lambda},
                                        {"with_b_feasible", with_b.feasible}});
    lambdas.push_back(lambda0);
  }
  double max_variation = 0.0;
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    max_variation = std::max(max_variation, std::abs(lambdas[i] - lambdas[i - 1]) / std::abs(lambdas[i - 1]));
  }
  art.summary(out, "coercivity_summary", Json{{"min_lambda0", *std::min_element(lambdas.begin(), lambdas.end())},
                                              {"max_relative_variation", max_variation}});
}

hypo::SemigroupConfig semigroup_config(const Json* j, const io::ExperimentManifest& m, int threads) {
  hypo::SemigroupConfig c;
  if (j) io::from_json(*j, c, "manifest.config.semigroup");
  c.tail_tolerance = detail::tolerance(m, "tail", c.tail_tolerance);
  c.threads = threads;
  return c;
}

void semigroup(const Json& cfg, const io::ExperimentManifest& m, const CommandContext& ctx, detail::Artifacts& art,
               CommandOutcome& out) {
  io::ObjectReader r(cfg, "manifest.config");
  std::string task;
  double q = 1.0, width = 1.0;
  std::vector<int> derivatives{0};
  int l_x = 0, n_times = 41;
  r.get("task", task);
  r.get("q", q);
  r.get("width", width);
  r.get("derivatives", derivatives);
  r.get("l_x", l_x);
  r.get("n_times", n_times);
  hypo::SemigroupConfig config = semigroup_config(r.child("semigroup"), m, ctx.threads);
  r.finish();
  if (derivatives.empty()) fail(ErrorKind::Config, "manifest.config.derivatives must be non-empty");

  const auto grid = hypo::geometric_grid(config.fit_t0, config.fit_t1, n_times);
  const hypo::ModeProfile profile = hypo::ModeProfile::for_q(q, config.n_modes, width);
  std::vector<std::string> columns{"t"};
  std::vector<hypo::SemigroupResult> results;
  for (int k_x : derivatives) {
    results.push_back(hypo::semigroup_decay(profile, q, k_x, l_x, grid, config));
    const auto& res = results.back();
    columns.push_back("norm_m" + std::to_string(k_x));
    art.summary(out, "semigroup_fit", Json{{"q", q},
                                           {"m", k_x},
                                           {"l", l_x},
                                           {"rate", res.fit.rate},
                                           {"r_squared", res.fit.r_squared},
                                           {"predicted_sigma", res.predicted_sigma},
                                           {"tail_share", res.tail_share},
                                           {"t0", res.fit.t0},
                                           {"t1", res.fit.t1}});
  }
  for (std::size_t i = 1; i < results.size(); ++i) {
    art.summary(out, "sigma_increment", Json{{"m_from", derivatives[0]},
                                             {"m_to", derivatives[i]},
                                             {"increment", results[i].fit.rate - results[0].fit.rate}});
  }
  io::CsvWriter csv(art.path(".csv").string(), m.seed, columns);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> row{grid[i]};
    for (const auto& res : results) row.push_back(res.norm[i]);
    csv.row(row);
  }
}

void mode_decay(const Json& cfg, const io::ExperimentManifest& m, detail::Artifacts& art, CommandOutcome& out) {
  io::ObjectReader r(cfg, "manifest.config");
  std::string task;
  std::vector<double> k_list{0.05, 0.1, 0.5, 1.0, 2.0, 10.0};
  std::vector<double> initial;
  int n_modes = 32, n_times = 201;
  double kappa = 0.05, t_max = 20.0, tail_start = 5.0;
  r.get("task", task);
  r.get("k_list", k_list);
  r.get("initial", initial);
  r.get("n_modes", n_modes);
  r.get("kappa", kappa);
  r.get("t_max", t_max);
  r.get("n_times", n_times);
  r.get("tail_start", tail_start);
  r.finish();
  if (n_times < 2 || !(t_max > tail_start)) fail(ErrorKind::Config, "mode_decay needs n_times >= 2 and t_max > tail_start");

  Eigen::VectorXcd f0 = Eigen::VectorXcd::Zero(n_modes);
  if (initial.empty()) {
    for (int i = 0; i < std::min(n_modes, 6); ++i) f0[i] = 1.0 / (1.0 + i);
  } else {
    if (static_cast<int>(initial.size()) > n_modes) fail(ErrorKind::Config, "manifest.config.initial longer than n_modes");
    for (std::size_t i = 0; i < initial.size(); ++i) f0[static_cast<Eigen::Index>(i)] = initial[i];
  }
  std::vector<double> grid;
  for (int i = 0; i < n_times; ++i) grid.push_back(t_max * i / (n_times - 1));

  const hypo::ModeDecayResult res = hypo::verify_mode_decay(k_list, f0, grid, kappa, tail_start);
  io::CsvWriter csv(art.path(".csv").string(), m.seed, {"k", "rate", "eigen_rate", "r_squared"});
  double min_r2 = 1.0;
  bool monotone = true;
  for (const auto& md : res.modes) {
    art.summary(out, "mode_rate", Json{{"k", md.k},
                                       {"rate", md.rate},
                                       {"eigen_rate", md.eigen_rate},
                                       {"r_squared", md.r_squared},
                                       {"eventually_monotone", md.eventually_monotone}});
    csv.row({md.k, md.rate, md.eigen_rate, md.r_squared});
    min_r2 = std::min(min_r2, md.r_squared);
    monotone = monotone && md.eventually_monotone;
  }
  art.summary(out, "mode_decay",
              Json{{"c", res.c}, {"small_k_slope", res.small_k_slope}, {"min_r_squared", min_r2}, {"all_monotone", monotone}});
}

void duhamel(const Json& cfg, const io::ExperimentManifest& m, const CommandContext& ctx, detail::Artifacts& art,
             CommandOutcome& out) {
  io::ObjectReader r(cfg, "manifest.config");
  std::string task;
  double q = 1.0, width = 1.0;
  int k_x = 0, n_times = 21;
  double source_amplitude = 0.1, source_width = 1.0, source_exponent = 2.0;
  int source_mode = 2;
  double t_min = 1.0, t_max = 100.0;
  r.get("task", task);
  r.get("t_min", t_min);
  r.get("t_max", t_max);
  r.get("q", q);
  r.get("width", width);
  r.get("m", k_x);
  r.get("n_times", n_times);
  r.get("source_amplitude", source_amplitude);
  r.get("source_width", source_width);
  r.get("source_exponent", source_exponent);
  r.get("source_mode", source_mode);
  hypo::SemigroupConfig config = semigroup_config(r.child("semigroup"), m, ctx.threads);
  r.finish();
  if (source_mode < 0 || source_mode >= config.n_modes) fail(ErrorKind::Config, "source_mode out of range");

  // h(k, s) = A exp(-(k/w)^2/2) (1+s)^(-p) e_mode; micro when mode >= 2.
  const hypo::SourceSeries h = [=](double k, double s) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(config.n_modes);
    v[source_mode] = source_amplitude * std::exp(-0.5 * (k / source_width) * (k / source_width)) *
                     std::pow(1.0 + s, -source_exponent);
    return v;
  };
  const auto grid = hypo::geometric_grid(t_min, t_max, n_times);
  const hypo::ModeProfile profile = hypo::ModeProfile::for_q(q, config.n_modes, width);
  const hypo::DuhamelResult res = hypo::duhamel_source(profile, h, q, k_x, grid, config);
  art.summary(out, "duhamel", Json{{"q", q},
                                   {"m", k_x},
                                   {"sigma", res.sigma},
                                   {"envelope_constant", res.envelope_constant}});
  io::CsvWriter csv(art.path(".csv").string(), m.seed, {"t", "norm_sq"});
  for (std::size_t i = 0; i < res.t.size(); ++i) csv.row({res.t[i], res.norm_sq[i]});
}

}  // namespace

CommandOutcome cmd_linear(const io::ExperimentManifest& manifest, const CommandContext& context) {
  detail::check_tolerance_keys(manifest, {"tail"});
  const Json& cfg = manifest.config;
  const std::string task = cfg.value("task", std::string{});
  if (task != "operator_check" && task != "coercivity" && task != "semigroup" && task != "mode_decay" &&
      task != "duhamel") {
    fail(ErrorKind::Config,
         "manifest.config.task must be one of operator_check, coercivity, semigroup, mode_decay, duhamel (got '" + task + "')");
  }
  // Task keys are checked inside each task; schema errors there still exit 2.
  return detail::with_artifacts(manifest, context, [&](detail::Artifacts& art, CommandOutcome& out) {
    if (task == "operator_check") operator_check(cfg, art, out);
    else if (task == "coercivity") coercivity(cfg, art, out);
    else if (task == "semigroup") semigroup(cfg, manifest, context, art, out);
    else if (task == "mode_decay") mode_decay(cfg, manifest, art, out);
    else duhamel(cfg, manifest, context, art, out);
  });
}

}  // namespace kflock::cli
