#include <vector>

#include "common.hpp"
#include "kineticflock/diagnostics/decay_fit.hpp"

namespace kflock::cli {

CommandOutcome cmd_fit(const io::ExperimentManifest& manifest, const CommandContext& context) {
  detail::check_tolerance_keys(manifest, {});
  io::ObjectReader r(manifest.config, "manifest.config");
  std::string input, record = "report", time_field = "t", quantity = "hs";
  std::vector<std::string> models{"algebraic", "exponential"};
  double t0 = 0.0, t1 = -1.0;
  r.get("input", input);
  r.get("record", record);
  r.get("time", time_field);
  r.get("quantity", quantity);
  r.get("models", models);
  r.get("t0", t0);
  r.get("t1", t1);
  r.finish();
  if (input.empty()) fail(ErrorKind::Config, "manifest.config.input is required");
  std::vector<diag::DecayModel> parsed;
  for (const auto& name : models) {
    try {
      parsed.push_back(diag::decay_model_from_string(name));
    } catch (const Error& e) {
      fail(ErrorKind::Config, std::string("manifest.config.models: ") + e.what());
    }
  }
  std::filesystem::path path = input;
  if (path.is_relative()) path = context.base_dir / path;

  return detail::with_artifacts(manifest, context, [&](detail::Artifacts& art, CommandOutcome& out) {
    const Json::json_pointer tp("/" + time_field), yp("/" + quantity);
    std::vector<double> t, y;
    for (const auto& rec : io::read_ndjson(path.string())) {
      if (!record.empty() && rec.record != record) continue;
      if (!rec.body.contains(tp) || !rec.body.contains(yp)) continue;
      const Json& tv = rec.body.at(tp);
      const Json& yv = rec.body.at(yp);
      if (!tv.is_number() || !yv.is_number()) continue;
      t.push_back(tv.get<double>());
      y.push_back(yv.get<double>());
    }
    art.ndjson().write("series", Json{{"input", path.string()}, {"record", record}, {"quantity", quantity}, {"samples", t.size()}});
    for (const auto model : parsed) {
      const diag::DecayFit fit = diag::fit_decay(t, y, model, t0, t1);
      art.summary(out, "decay_fit", Json{{"quantity", quantity},
                                         {"model", diag::to_string(fit.model)},
                                         {"rate", fit.rate},
                                         {"log_slope", -fit.rate},
                                         {"log_prefactor", fit.log_prefactor},
                                         {"r_squared", fit.r_squared},
                                         {"t0", fit.t0},
                                         {"t1", fit.t1},
                                         {"samples", fit.samples}});
    }
  });
}

}  // namespace kflock::cli
