#pragma once

#include <span>
#include <string>

namespace kflock::diag {

enum class DecayModel { Algebraic, Exponential };

/// y ~ A (1+t)^(-rate) or y ~ A exp(-rate t); positive rate means decay.
struct DecayFit {
  DecayModel model = DecayModel::Exponential;
  double rate = 0.0;
  double log_prefactor = 0.0;
  double r_squared = 0.0;
  double t0 = 0.0;
  double t1 = 0.0;
  int samples = 0;
};

/// Least squares on log y against log(1+t) or t, restricted to
/// t in [t0, t1] (the whole series when t0 > t1).
DecayFit fit_decay(std::span<const double> t, std::span<const double> y, DecayModel model, double t0 = 0.0,
                   double t1 = -1.0);

/// Ordinary least-squares line; returns slope, intercept and r^2.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

std::string to_string(DecayModel model);
DecayModel decay_model_from_string(const std::string& name);

}  // namespace kflock::diag
