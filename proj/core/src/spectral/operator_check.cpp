#include "kineticflock/spectral/operator_check.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "kineticflock/error.hpp"
#include "kineticflock/spectral/hermite_basis.hpp"

namespace kflock::spectral {

OperatorCheck check_L_against_finite_differences(int n_max, int points, double v_max) {
  if (n_max < 0 || points < 5 || !(v_max > 0.0)) fail(ErrorKind::Config, "operator check needs n_max >= 0, points >= 5, v_max > 0");
  const double h = 2.0 * v_max / (points - 1);
  const int ghost = 2;
  const int total = points + 2 * ghost;

  // samples(i, n) = psi_n(v_i), rows including two ghost points per side
  Eigen::MatrixXd samples(total, n_max + 1);
  std::vector<double> row(static_cast<std::size_t>(n_max) + 1);
  for (int i = 0; i < total; ++i) {
    const double v = -v_max + (i - ghost) * h;
    HermiteBasis::evaluate(v, row);
    for (int n = 0; n <= n_max; ++n) samples(i, n) = row[n];
  }

  const BasisShape shape(n_max + 1, 1);
  OperatorCheck out;
  for (int n = 0; n <= n_max; ++n) {
    const RealVector Lc = apply_L(shape, RealVector::Unit(n_max + 1, n));
    double err = 0.0, ref = 0.0;
    for (int i = ghost; i < points + ghost; ++i) {
      const double v = -v_max + (i - ghost) * h;
      const auto f = [&](int j) { return samples(j, n); };
      const double d2 = (-f(i - 2) + 16.0 * f(i - 1) - 30.0 * f(i) + 16.0 * f(i + 1) - f(i + 2)) / (12.0 * h * h);
      const double fd = d2 + 0.25 * (2.0 - v * v) * f(i);
      const double spectral = samples.row(i).dot(Lc);
      err += (fd - spectral) * (fd - spectral);
      ref += f(i) * f(i);
    }
    out.rel_error.push_back(std::sqrt(err / ref));
    out.max_rel_error = std::max(out.max_rel_error, out.rel_error.back());
  }
  return out;
}

}  // namespace kflock::spectral
