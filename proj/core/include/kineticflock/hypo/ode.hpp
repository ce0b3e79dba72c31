#pragma once

#include <Eigen/Dense>

#include <functional>

namespace kflock::hypo {

/// dy/dt = rhs(t, y) for complex vectors.
using OdeRhs = std::function<Eigen::VectorXcd(double, const Eigen::VectorXcd&)>;

struct OdeOptions {
  double rtol = 1e-11;
  double atol = 1e-13;
  double initial_step = 1e-3;
  double max_step = 0.0;  // 0 = unbounded
  long max_steps = 10'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
};

/// Adaptive Dormand-Prince 5(4) from t0 to t1 (t1 >= t0).
Eigen::VectorXcd integrate_dopri5(const OdeRhs& rhs, Eigen::VectorXcd y, double t0, double t1,
                                  const OdeOptions& options = {}, OdeStats* stats = nullptr);

}  // namespace kflock::hypo
