#include "kineticflock/diagnostics/decay_fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kineticflock/error.hpp"

namespace kflock::diag {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrorKind::DegenerateSeries, "line fit needs >= 2 paired samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) fail(ErrorKind::DegenerateSeries, "line fit abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = y[i] - (fit.intercept + fit.slope * x[i]);
      ss_res += e * e;
    }
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

DecayFit fit_decay(std::span<const double> t, std::span<const double> y, DecayModel model, double t0,
                   double t1) {
  if (t.size() != y.size()) fail(ErrorKind::DegenerateSeries, "time and value series differ in length");
  const bool whole = t0 > t1;
  std::vector<double> xs, ys;
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!whole && (t[i] < t0 || t[i] > t1)) continue;
    if (!(y[i] > 0.0) || !std::isfinite(y[i])) {
      fail(ErrorKind::DegenerateSeries, "non-positive or non-finite value " + std::to_string(y[i]) +
                                            " at t = " + std::to_string(t[i]));
    }
    if (xs.empty()) lo = t[i];
    hi = t[i];
    xs.push_back(model == DecayModel::Algebraic ? std::log1p(t[i]) : t[i]);
    ys.push_back(std::log(y[i]));
  }
  if (xs.size() < 10) {
    fail(ErrorKind::DegenerateSeries, "decay fit needs >= 10 samples in the window, got " + std::to_string(xs.size()));
  }
  bool constant = true;
  for (double v : ys) constant = constant && v == ys.front();
  if (constant) fail(ErrorKind::DegenerateSeries, "series is constant over the fit window");

  const LineFit line = fit_line(xs, ys);
  DecayFit fit;
  fit.model = model;
  fit.rate = -line.slope;
  fit.log_prefactor = line.intercept;
  fit.r_squared = line.r_squared;
  fit.t0 = lo;
  fit.t1 = hi;
  fit.samples = static_cast<int>(xs.size());
  return fit;
}

std::string to_string(DecayModel model) {
  return model == DecayModel::Algebraic ? "algebraic" : "exponential";
}

DecayModel decay_model_from_string(const std::string& name) {
  if (name == "algebraic") return DecayModel::Algebraic;
  if (name == "exponential") return DecayModel::Exponential;
  fail(ErrorKind::Config, "unknown decay model '" + name + "' (expected algebraic or exponential)");
}

}  // namespace kflock::diag
