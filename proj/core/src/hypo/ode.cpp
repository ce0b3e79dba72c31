#include "kineticflock/hypo/ode.hpp"

#include <algorithm>
#include <cmath>

#include "kineticflock/error.hpp"

namespace kflock::hypo {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Eigen::VectorXcd integrate_dopri5(const OdeRhs& rhs, Eigen::VectorXcd y, double t0, double t1,
                                  const OdeOptions& opt, OdeStats* stats) {
  if (!(t1 >= t0)) fail(ErrorKind::Config, "ODE integration needs t1 >= t0");
  if (t1 == t0) return y;
  double t = t0;
  double h = std::min(opt.initial_step, t1 - t0);
  Eigen::VectorXcd k1 = rhs(t, y);
  long steps = 0;
  while (t < t1) {
    if (++steps > opt.max_steps) fail(ErrorKind::NonFinite, "ODE integrator exceeded its step budget");
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
    const bool last = t + h >= t1;
    if (last) h = t1 - t;

    const Eigen::VectorXcd k2 = rhs(t + c2 * h, y + h * a21 * k1);
    const Eigen::VectorXcd k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Eigen::VectorXcd k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Eigen::VectorXcd k5 = rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Eigen::VectorXcd k6 = rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Eigen::VectorXcd y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Eigen::VectorXcd k7 = rhs(t + h, y_new);
    const Eigen::VectorXcd err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err_norm = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double scale = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err_norm = std::max(err_norm, std::abs(err[i]) / scale);
    }
    if (!std::isfinite(err_norm)) fail(ErrorKind::NonFinite, "ODE state became non-finite");

    if (err_norm <= 1.0) {
      t = last ? t1 : t + h;
      y = std::move(y_new);
      k1 = k7;  // first-same-as-last
      if (stats) ++stats->accepted;
    } else if (stats) {
      ++stats->rejected;
    }
    const double factor = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
    h *= factor;
  }
  return y;
}

}  // namespace kflock::hypo
