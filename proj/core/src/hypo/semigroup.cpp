#include "kineticflock/hypo/semigroup.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <mutex>

#include "kineticflock/error.hpp"
#include "kineticflock/hypo/linear_mode.hpp"
#include "kineticflock/hypo/ode.hpp"
#include "kineticflock/util/parallel.hpp"

namespace kflock::hypo {

namespace {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  // Golub-Welsch on the Legendre Jacobi matrix.
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) j(i, i - 1) = j(i - 1, i) = i / std::sqrt(4.0 * i * i - 1.0);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(j);
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] = eig.eigenvalues()[i];
    const double v0 = eig.eigenvectors()(0, i);
    w[static_cast<std::size_t>(i)] = 2.0 * v0 * v0;
  }
}

void add_panel(double a, double b, const std::vector<double>& x, const std::vector<double>& w,
               std::vector<double>& nodes, std::vector<double>& weights) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (std::size_t i = 0; i < x.size(); ++i) {
    nodes.push_back(mid + half * x[i]);
    weights.push_back(half * w[i]);
  }
}

double derivative_weight(double k, int k_x) { return std::pow(k * k, k_x); }

}  // namespace

Eigen::VectorXcd ModeProfile::at(double k) const {
  const double ak = std::abs(k);
  double scale = std::exp(-0.5 * (ak / width) * (ak / width));
  if (low_k_exponent != 0.0) scale *= std::pow(ak, -low_k_exponent);
  return scale * hermite;
}

ModeProfile ModeProfile::for_q(double q, int n_modes, double width) {
  if (!(q >= 1.0 && q <= 2.0)) fail(ErrorKind::Config, "q must lie in [1, 2]");
  ModeProfile p;
  p.hermite = Eigen::VectorXcd::Zero(n_modes);
  p.hermite[0] = 1.0;
  p.hermite[1] = 0.5;
  if (n_modes > 2) p.hermite[2] = 0.25;
  p.hermite /= p.hermite.norm();
  p.low_k_exponent = q == 2.0 ? 0.0 : 1.0 - 1.0 / q;
  p.width = width;
  return p;
}

double sigma_index(int d, double q, int m) {
  if (d < 1) fail(ErrorKind::Config, "dimension must be >= 1");
  if (!(q >= 1.0 && q <= 2.0)) fail(ErrorKind::Config, "q must lie in [1, 2]");
  if (m < 0) fail(ErrorKind::Config, "derivative gain m must be >= 0");
  return 0.5 * d * (1.0 / q - 0.5) + 0.5 * m;
}

void WavenumberQuadrature::build() {
  if (panels < 2 || points_per_panel < 1) fail(ErrorKind::Config, "quadrature needs >= 2 panels and >= 1 point");
  if (!(k_first > 0.0 && k_max > k_first)) fail(ErrorKind::Config, "quadrature needs 0 < k_first < k_max");
  std::vector<double> x, w;
  gauss_legendre(points_per_panel, x, w);
  nodes.clear();
  weights.clear();
  add_panel(0.0, k_first, x, w, nodes, weights);
  const double ratio = std::pow(k_max / k_first, 1.0 / (panels - 1));
  double a = k_first;
  for (int p = 1; p < panels; ++p) {
    const double b = p == panels - 1 ? k_max : a * ratio;
    add_panel(a, b, x, w, nodes, weights);
    a = b;
  }
}

std::vector<double> geometric_grid(double t0, double t1, int n) {
  if (n < 2 || !(t0 > 0.0) || !(t1 > t0)) fail(ErrorKind::Config, "geometric grid needs n >= 2 and 0 < t0 < t1");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = t0 * std::pow(t1 / t0, static_cast<double>(i) / (n - 1));
  return out;
}

void require_micro_source(const Eigen::Ref<const Eigen::VectorXcd>& h, double k, double s) {
  const double scale = std::max(1.0, h.norm());
  if (std::abs(h[0]) > 1e-14 * scale || (h.size() > 1 && std::abs(h[1]) > 1e-14 * scale)) {
    fail(ErrorKind::SourceNotMicro, "source has a macro component at k = " + std::to_string(k) +
                                        ", s = " + std::to_string(s) + "; <h, sqrt(M)> and <h, v sqrt(M)> must vanish");
  }
}

SemigroupResult semigroup_decay(const ModeProfile& profile, double q, int k_x, int l_x,
                                const std::vector<double>& t_grid, const SemigroupConfig& config) {
  if (k_x < l_x) fail(ErrorKind::Config, "derivative orders need k_x >= l_x");
  if (profile.hermite.size() != config.n_modes) fail(ErrorKind::Shape, "profile length must equal n_modes");
  WavenumberQuadrature quad = config.quadrature;
  quad.build();

  SemigroupResult result;
  result.t = t_grid;
  result.predicted_sigma = sigma_index(1, q, k_x - l_x);
  std::vector<double> total(t_grid.size(), 0.0);
  std::mutex merge;
  parallel_for(static_cast<std::ptrdiff_t>(quad.nodes.size()), config.threads, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    std::vector<double> local(t_grid.size(), 0.0);
    for (std::ptrdiff_t i = lo; i < hi; ++i) {
      const double k = quad.nodes[static_cast<std::size_t>(i)];
      const double w = 2.0 * quad.weights[static_cast<std::size_t>(i)] * derivative_weight(k, k_x);
      const LinearModeSystem system(k, config.n_modes, config.kappa);
      const std::vector<Eigen::VectorXcd> states = evolve_series(system, profile.at(k), t_grid);
      for (std::size_t j = 0; j < states.size(); ++j) local[j] += w * states[j].squaredNorm();
    }
    std::lock_guard lock(merge);
    for (std::size_t j = 0; j < local.size(); ++j) total[j] += local[j];
  });

  // The semigroup is an L^2 contraction per k, so the initial tail bounds the
  // tail at every later time.
  std::vector<double> x, w;
  gauss_legendre(16, x, w);
  double tail = 0.0;
  std::vector<double> tail_nodes, tail_weights;
  for (int p = 0; p < 8; ++p) {
    add_panel(quad.k_max * (1 + p), quad.k_max * (2 + p), x, w, tail_nodes, tail_weights);
  }
  for (std::size_t i = 0; i < tail_nodes.size(); ++i) {
    tail += 2.0 * tail_weights[i] * derivative_weight(tail_nodes[i], k_x) * profile.at(tail_nodes[i]).squaredNorm();
  }
  const double smallest = *std::min_element(total.begin(), total.end());
  result.tail_share = smallest > 0.0 ? tail / smallest : std::numeric_limits<double>::infinity();
  if (result.tail_share > config.tail_tolerance) {
    fail(ErrorKind::TailNotConverged, "tail beyond k_max = " + std::to_string(quad.k_max) + " is " +
                                          std::to_string(result.tail_share) + " of the smallest norm^2");
  }

  result.norm.resize(total.size());
  for (std::size_t j = 0; j < total.size(); ++j) result.norm[j] = std::sqrt(total[j]);
  result.fit = diag::fit_decay(result.t, result.norm, diag::DecayModel::Algebraic, config.fit_t0, config.fit_t1);
  return result;
}

DuhamelResult duhamel_source(const ModeProfile& profile, const SourceSeries& h, double q, int k_x,
                             const std::vector<double>& t_grid, const SemigroupConfig& config) {
  if (profile.hermite.size() != config.n_modes) fail(ErrorKind::Shape, "profile length must equal n_modes");
  WavenumberQuadrature quad = config.quadrature;
  quad.build();
  for (double k : {quad.nodes.front(), quad.nodes.back()}) {
    for (double s : {0.0, t_grid.empty() ? 0.0 : t_grid.back()}) require_micro_source(h(k, s), k, s);
  }

  DuhamelResult result;
  result.t = t_grid;
  result.sigma = sigma_index(1, q, k_x);
  std::vector<double> total(t_grid.size(), 0.0);
  std::mutex merge;
  parallel_for(static_cast<std::ptrdiff_t>(quad.nodes.size()), config.threads, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    std::vector<double> local(t_grid.size(), 0.0);
    for (std::ptrdiff_t i = lo; i < hi; ++i) {
      const double k = quad.nodes[static_cast<std::size_t>(i)];
      const double w = 2.0 * quad.weights[static_cast<std::size_t>(i)] * derivative_weight(k, k_x);
      const LinearModeSystem system(k, config.n_modes, config.kappa);
      const Eigen::MatrixXcd& g = system.generator();
      const OdeRhs rhs = [&](double s, const Eigen::VectorXcd& y) {
        Eigen::VectorXcd hs = h(k, s);
        require_micro_source(hs, k, s);
        return Eigen::VectorXcd(g * y + hs);
      };
      OdeOptions opt;
      opt.rtol = 1e-9;
      opt.atol = 1e-14;
      Eigen::VectorXcd y = profile.at(k);
      double t = 0.0;
      for (std::size_t j = 0; j < t_grid.size(); ++j) {
        y = integrate_dopri5(rhs, y, t, t_grid[j], opt);
        t = t_grid[j];
        local[j] += w * y.squaredNorm();
      }
    }
    std::lock_guard lock(merge);
    for (std::size_t j = 0; j < local.size(); ++j) total[j] += local[j];
  });
  result.norm_sq = total;
  for (std::size_t j = 0; j < total.size(); ++j) {
    result.envelope_constant = std::max(result.envelope_constant, total[j] * std::pow(1.0 + t_grid[j], 2.0 * result.sigma));
  }
  return result;
}

}  // namespace kflock::hypo
