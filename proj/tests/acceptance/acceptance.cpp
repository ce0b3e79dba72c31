// Runs the shipped acc-NN presets and prints one PASS/FAIL line per criterion.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "kineticflock_cli/commands.hpp"

namespace fs = std::filesystem;
using kflock::cli::CommandOutcome;
using kflock::cli::Json;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* preset;
  const char* title;
  double time_limit;  // seconds
  std::function<Verdict(const CommandOutcome&)> check;
};

double num(const Json* rec, const char* key) {
  if (!rec || !rec->contains(key) || !rec->at(key).is_number()) return std::nan("");
  return rec->at(key).get<double>();
}

bool within(double x, double lo, double hi) { return x >= lo && x <= hi; }

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Verdict operator_oracle(const CommandOutcome& o) {
  const double e = num(kflock::cli::find_record(o, "operator_check"), "max_rel_error");
  return {e <= 1e-6, fmt("max rel error %.3e <= 1e-6", e)};
}

Verdict conservation(const CommandOutcome& o) {
  const Json* r = kflock::cli::find_record(o, "conservation");
  const double m = num(r, "mass_drift") / std::abs(num(r, "mass_initial"));
  const double p = num(r, "momentum_drift") / std::abs(num(r, "momentum_initial"));
  return {m <= 1e-8 && p <= 1e-8, fmt("relative drift mass %.3e, momentum %.3e <= 1e-8", m, p)};
}

Verdict torus_decay(const CommandOutcome& o) {
  const Json* r = kflock::cli::find_record(o, "decay_fit");
  const double r2 = num(r, "r_squared"), c = num(r, "log_slope");
  return {r2 >= 0.99 && c < 0.0, fmt("log|f|_Hs slope c = %.4f < 0, r^2 = %.8f >= 0.99 on [%g, %g]", c, r2,
                                     num(r, "t0"), num(r, "t1"))};
}

Verdict algebraic_decay(const CommandOutcome& o) {
  double r0 = std::nan(""), r1 = std::nan("");
  for (const auto& rec : o.summary) {
    if (rec.value("record", "") != "semigroup_fit") continue;
    if (rec.value("m", -1) == 0) r0 = rec.at("rate").get<double>();
    if (rec.value("m", -1) == 1) r1 = rec.at("rate").get<double>();
  }
  const double inc = r1 - r0;
  return {within(r0, 0.23, 0.27) && within(inc, 0.45, 0.55),
          fmt("sigma(m=0) = %.4f in [0.23, 0.27], m=1 increment %.4f in [0.45, 0.55]", r0, inc)};
}

Verdict mode_decay(const CommandOutcome& o) {
  const Json* r = kflock::cli::find_record(o, "mode_decay");
  const double c = num(r, "c"), s = num(r, "small_k_slope");
  return {c > 0.0 && within(s, 1.9, 2.1), fmt("c = %.4f > 0, small-k slope %.4f in [1.9, 2.1]", c, s)};
}

Verdict coercivity(const CommandOutcome& o) {
  const Json* r = kflock::cli::find_record(o, "coercivity_summary");
  const double l = num(r, "min_lambda0"), v = num(r, "max_relative_variation");
  return {l > 0.0 && v <= 0.10, fmt("min lambda0 = %.6f > 0, variation %.3e <= 0.10", l, v)};
}

Verdict mean_field(const CommandOutcome& o) {
  const Json* s = kflock::cli::find_record(o, "sampling_slope");
  const Json* t = kflock::cli::find_record(o, "epsilon_trend");
  const double slope = num(s, "slope");
  const bool trend = t && t->value("non_increasing", false);
  std::string d = fmt("slope %.4f in [-0.6, -0.4], non-increasing in eps at N = 1e5: ", slope) + (trend ? "yes" : "no");
  if (t) d += " " + t->at("distance").dump();
  return {within(slope, -0.6, -0.4) && trend, d};
}

Verdict residual_ratio(const CommandOutcome& o) {
  const Json* r = kflock::cli::find_record(o, "residual_ratio");
  if (!r) return {false, "no residual_ratio record"};
  double lo = INFINITY, hi = -INFINITY;
  for (const char* key : {"mass", "momentum", "Aij"}) {
    lo = std::min(lo, r->at(key).at("min").get<double>());
    hi = std::max(hi, r->at(key).at("max").get<double>());
  }
  return {within(lo, 1.7, 2.3) && within(hi, 1.7, 2.3), fmt("residual ratios in [%.4f, %.4f] within [1.7, 2.3]", lo, hi)};
}

Verdict energy_inequality(const CommandOutcome& o) {
  const Json* r = kflock::cli::find_record(o, "dissipation_fit");
  const double c5 = num(r, "C5"), f = num(r, "fraction");
  return {c5 > 0.0 && f >= 0.95, fmt("C5 = %.4f > 0 holds on %.4f >= 0.95 of %g steps after t = 1", c5, f, num(r, "steps"))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kineticflock acceptance suite"};
  std::string preset_dir = KFLOCK_PRESET_DIR;
  std::string out_dir = KFLOCK_ACCEPTANCE_OUT;
  int threads = 0;
  std::vector<int> only;
  app.add_option("--presets", preset_dir, "directory holding acc-NN.json");
  app.add_option("--out", out_dir, "artifact directory");
  app.add_option("--threads", threads, "worker threads (default: KINETICFLOCK_THREADS or all cores)");
  app.add_option("--only", only, "criterion numbers to run");
  CLI11_PARSE(app, argc, argv);

  if (threads <= 0) {
    threads = std::getenv("KINETICFLOCK_THREADS") ? kflock::cli::resolve_threads(0)
                                                   : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }

  const std::vector<Criterion> criteria{
      {1, "acc-01", "operator oracle", 5, operator_oracle},
      {2, "acc-02", "conservation", 120, conservation},
      {3, "acc-03", "torus exponential decay", 300, torus_decay},
      {4, "acc-04", "linear algebraic decay", 180, algebraic_decay},
      {5, "acc-05", "mode Lyapunov decay", 120, mode_decay},
      {6, "acc-06", "coercivity", 30, coercivity},
      {7, "acc-07", "mean-field trend", 600, mean_field},
      {8, "acc-08", "macro balance residuals", 180, residual_ratio},
      {9, "acc-09", "energy inequality", 300, energy_inequality},
  };
  const std::set<int> selected(only.begin(), only.end());

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const fs::path preset = fs::path(preset_dir) / (std::string(c.preset) + ".json");
    Verdict v;
    double seconds = 0.0;
    try {
      const kflock::io::ExperimentManifest m = kflock::io::load_manifest(preset.string());
      kflock::cli::CommandContext ctx;
      ctx.out_dir = fs::path(out_dir) / c.preset;
      ctx.base_dir = preset_dir;
      ctx.threads = threads;
      ctx.quiet = true;
      const auto start = std::chrono::steady_clock::now();
      const CommandOutcome o = kflock::cli::run_manifest(m, ctx);
      seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (o.exit_code != kflock::cli::kOk) {
        v = {false, "run failed (" + o.error_kind + "): " + o.message};
      } else {
        v = c.check(o);
      }
    } catch (const std::exception& e) {
      v = {false, e.what()};
    }
    const bool in_time = seconds < c.time_limit;
    if (!in_time) v.detail += fmt("; runtime over the %g s limit", c.time_limit);
    const bool pass = v.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("criterion %d: %s  %s: %s [%.1f s]\n", c.id, pass ? "PASS" : "FAIL", c.title, v.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
