#include "kineticflock/diagnostics/functionals.hpp"

#include <cmath>

#include "kineticflock/error.hpp"
#include "kineticflock/kinetic/alignment.hpp"

namespace kflock::diag {

namespace {

constexpr Complex kI{0.0, 1.0};

// |d_v^l c|^2 (or its mu-norm) for l = 0..s with no truncation along the way.
std::vector<double> velocity_derivative_norms(const Eigen::VectorXcd& c, int s, bool mu) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(s) + 1);
  Eigen::VectorXcd d = c;
  int n = static_cast<int>(c.size());
  for (int l = 0; l <= s; ++l) {
    const spectral::BasisShape shape(n, 1);
    out.push_back(mu ? spectral::mu_norm_sq(shape, d) : d.squaredNorm());
    if (l < s) {
      d = spectral::apply_d_dv_extended(shape, d);
      ++n;
    }
  }
  return out;
}

double power_sum(double k2, int max_power) {
  double total = 0.0, term = 1.0;
  for (int j = 0; j <= max_power; ++j) {
    total += term;
    term *= k2;
  }
  return total;
}

double mixed_sum(const SpectralField& f, int s, bool micro, bool mu) {
  if (s < 0) fail(ErrorKind::Config, "Sobolev order must be >= 0");
  double total = 0.0;
  for (int k = -f.K(); k <= f.K(); ++k) {
    Eigen::VectorXcd c = f.mode(k);
    if (micro) c.head(std::min<Eigen::Index>(2, c.size())).setZero();
    const double k2 = f.wavenumber(k) * f.wavenumber(k);
    const std::vector<double> norms = velocity_derivative_norms(c, s, mu);
    for (int l = 0; l <= s; ++l) total += power_sum(k2, s - l) * norms[static_cast<std::size_t>(l)];
  }
  return total;
}

Eigen::VectorXcd row(const SpectralField& f, int n) {
  if (n >= f.n_modes()) return Eigen::VectorXcd::Zero(f.n_wavenumbers());
  return f.coeffs().row(n).transpose();
}

Eigen::VectorXcd derivative(const SpectralField& f, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out(v.size());
  for (int k = -f.K(); k <= f.K(); ++k) out[k + f.K()] = kI * f.wavenumber(k) * v[k + f.K()];
  return out;
}

// u (v/2 - d_v) g for g given as rows; mode n gets sqrt(n) [u g]_{n-1}.
SpectralField raise_with(const SpectralField& g, const Eigen::VectorXd& u, const Collocation& grid) {
  const int N = g.n_modes();
  SpectralField out(g.K(), N, g.domain_length(), g.time());
  Eigen::MatrixXd values = grid.rows_to_grid(g.coeffs().topRows(N - 1));
  values.array().rowwise() *= u.transpose().array();
  const Eigen::MatrixXcd q = grid.rows_from_grid(values);
  for (int n = 1; n < N; ++n) out.coeffs().row(n) = std::sqrt(static_cast<double>(n)) * q.row(n - 1);
  return out;
}

}  // namespace

double EnergyWeights::C_l(int l) const {
  if (l >= 1 && static_cast<std::size_t>(l) <= C.size()) return C[static_cast<std::size_t>(l) - 1];
  return std::ldexp(1.0, -l);
}

MacroFields macro_fields(const SpectralField& f, const Collocation& grid) {
  MacroFields m;
  m.a = grid.to_grid(row(f, 0));
  m.b = grid.to_grid(row(f, 1));
  m.dx = grid.dx();
  return m;
}

double sobolev_norm_sq(const SpectralField& f, int s) { return mixed_sum(f, s, false, false); }

double spatial_sobolev_norm_sq(const SpectralField& f, int s) {
  double total = 0.0;
  for (int k = -f.K(); k <= f.K(); ++k) {
    const double k2 = f.wavenumber(k) * f.wavenumber(k);
    total += power_sum(k2, s) * f.mode(k).squaredNorm();
  }
  return total;
}

double micro_mu_norm_sq(const SpectralField& f, int s) { return mixed_sum(f, s, true, true); }

double micro_velocity_block(const SpectralField& f, int s, const EnergyWeights& w) {
  double total = 0.0;
  for (int k = -f.K(); k <= f.K(); ++k) {
    Eigen::VectorXcd c = f.mode(k);
    c.head(std::min<Eigen::Index>(2, c.size())).setZero();
    const double k2 = f.wavenumber(k) * f.wavenumber(k);
    const std::vector<double> norms = velocity_derivative_norms(c, s, false);
    for (int l = 1; l <= s; ++l) total += w.C_l(l) * power_sum(k2, s - l) * norms[static_cast<std::size_t>(l)];
  }
  return total;
}

double grad_ab_norm_sq(const SpectralField& f, int s) {
  double total = 0.0;
  const Eigen::VectorXcd a = row(f, 0), b = row(f, 1);
  for (int k = -f.K(); k <= f.K(); ++k) {
    const double k2 = f.wavenumber(k) * f.wavenumber(k);
    const double weight = power_sum(k2, s) - 1.0;  // sum_{j=1..s} k^{2j}
    total += weight * (std::norm(a[k + f.K()]) + std::norm(b[k + f.K()]));
  }
  return total;
}

Complex moment_Aij(const spectral::BasisShape& shape, const Eigen::Ref<const Eigen::VectorXcd>& g, int i, int j) {
  spectral::detail::require_size(shape, g);
  spectral::detail::require_component(shape, i);
  spectral::detail::require_component(shape, j);
  if (i == j) {
    // (v_i^2 - 1) sqrt(M) = sqrt(2) psi_{2 e_i}
    if (shape.n_modes() <= 2) return 0.0;
    return std::sqrt(2.0) * g[2 * shape.stride(i)];
  }
  if (shape.n_modes() <= 1) return 0.0;
  return g[shape.stride(i) + shape.stride(j)];
}

Eigen::VectorXcd moment_Aij(const SpectralField& f, int i, int j) {
  const spectral::BasisShape shape(f.n_modes(), 1);
  Eigen::VectorXcd out(f.n_wavenumbers());
  for (int k = -f.K(); k <= f.K(); ++k) out[k + f.K()] = moment_Aij(shape, f.mode(k), i, j);
  return out;
}

SpectralField micro_part(const SpectralField& f) {
  SpectralField g = f;
  g.coeffs().topRows(std::min(2, f.n_modes())).setZero();
  return g;
}

std::pair<SpectralField, SpectralField> ell_and_r(const SpectralField& f, const Collocation& grid,
                                                  double density_floor) {
  const SpectralField g = micro_part(f);
  const int N = f.n_modes();
  SpectralField ell(f.K(), N, f.domain_length(), f.time());
  for (int k = -f.K(); k <= f.K(); ++k) {
    const Complex ik = kI * f.wavenumber(k);
    const Eigen::VectorXcd gk = g.mode(k);
    const spectral::BasisShape shape(N, 1);
    ell.mode(k) = -ik * spectral::apply_mult_v(shape, gk) + spectral::apply_L(shape, gk);
  }
  const Eigen::VectorXd u = kinetic::compute_uF(f, grid, density_floor);
  return {std::move(ell), raise_with(g, u, grid)};
}

BalanceResiduals balance_residuals(const SpectralField& before, const SpectralField& after, const Collocation& grid,
                                   double density_floor) {
  if (!before.same_layout(after)) fail(ErrorKind::Shape, "snapshots differ in layout");
  const double dt = after.time() - before.time();
  if (!(dt > 0.0)) fail(ErrorKind::Config, "snapshots must be ordered in time");

  const Eigen::VectorXcd a0 = row(before, 0), a1 = row(after, 0);
  const Eigen::VectorXcd b0 = row(before, 1), b1 = row(after, 1);
  const Eigen::VectorXcd A0 = moment_Aij(micro_part(before)), A1 = moment_Aij(micro_part(after));

  BalanceResiduals r;
  r.mass = (a1 - a0) / dt + derivative(after, b1);
  r.momentum = (b1 - b0) / dt + derivative(after, a1) + derivative(after, A1);

  const Eigen::VectorXd u = kinetic::compute_uF(after, grid, density_floor);
  const Eigen::VectorXd b_grid = grid.to_grid(b1);
  const Eigen::VectorXcd flux = grid.from_grid(u.cwiseProduct(b_grid));  // b^2/(1+a)
  auto [ell, rr] = ell_and_r(after, grid, density_floor);
  ell += rr;
  r.a11 = (A1 - A0) / dt + 2.0 * derivative(after, b1) - 2.0 * flux - moment_Aij(ell);

  r.mass_norm = r.mass.norm();
  r.momentum_norm = r.momentum.norm();
  r.a11_norm = r.a11.norm();
  return r;
}

double energy_E0(const SpectralField& f, int s) {
  if (s < 1) fail(ErrorKind::Config, "E0 needs s >= 1");
  const Eigen::VectorXcd a = row(f, 0), b = row(f, 1);
  const Eigen::VectorXcd A = moment_Aij(micro_part(f));
  double total = 0.0;
  for (int k = -f.K(); k <= f.K(); ++k) {
    const int i = k + f.K();
    const double kk = f.wavenumber(k);
    const double weight = power_sum(kk * kk, s - 1);
    const Complex db = kI * kk * b[i];
    total += weight * (std::real(2.0 * db * std::conj(A[i])) - std::real(a[i] * std::conj(db)));
  }
  return total;
}

double energy_E0_bound(const SpectralField& f, int s) {
  // |2 k b A| <= sqrt(2)(|k b|^2 + |g_2|^2) and |k a b| <= (|a|^2 + |k b|^2)/2
  // term by term, so |E0| <= (sqrt(2) + 1/2) |f|^2_{L^2_v(H^s)}.
  return (std::sqrt(2.0) + 0.5) * spatial_sobolev_norm_sq(f, s);
}

EnergyPair energy_total(const SpectralField& f, int s, const EnergyWeights& w) {
  if (!(w.nu1 > 0.0) || !(w.nu2 > 0.0)) fail(ErrorKind::Config, "energy weights must be positive");
  const double base = spatial_sobolev_norm_sq(f, s);
  const double e0 = energy_E0(f, s);
  EnergyPair out;
  out.E = w.nu2 * (w.nu1 * base + e0) + micro_velocity_block(f, s, w);
  out.D = micro_mu_norm_sq(f, s) + grad_ab_norm_sq(f, s);
  const double floor = 0.5 * w.nu1 * w.nu2 * base;
  if (out.E < floor * (1.0 - 1e-12)) {
    fail(ErrorKind::NonPositiveEnergy, "E = " + std::to_string(out.E) + " is below nu1 nu2 |f|^2 / 2 = " +
                                           std::to_string(floor) + "; increase nu1");
  }
  return out;
}

EnergyReport make_report(const SpectralField& f, const Collocation& grid, int s, const EnergyWeights& w,
                         const SpectralField* previous, double density_floor) {
  EnergyReport r;
  r.t = f.time();
  r.l2 = std::sqrt(f.squared_norm());
  r.hs = std::sqrt(sobolev_norm_sq(f, s));
  r.mass = f.domain_length() * f(0, 0).real();
  r.momentum = f.n_modes() > 1 ? f.domain_length() * f(0, 1).real() : 0.0;
  r.micro_mu = micro_mu_norm_sq(f, s);
  r.grad_ab = grad_ab_norm_sq(f, s);
  r.E0 = energy_E0(f, s);
  const EnergyPair e = energy_total(f, s, w);
  r.E_total = e.E;
  r.D_total = e.D;
  r.A11 = moment_Aij(micro_part(f)).norm();
  const auto [ell, rr] = ell_and_r(f, grid, density_floor);
  r.A11_ell = moment_Aij(ell).norm();
  r.r_norm = std::sqrt(rr.squared_norm());
  r.energy_ratio = r.hs > 0.0 ? r.E_total / (r.hs * r.hs) : 0.0;
  r.min_density = 1.0 + grid.to_grid(row(f, 0)).minCoeff();
  if (previous) {
    const BalanceResiduals res = balance_residuals(*previous, f, grid, density_floor);
    r.residual_mass = res.mass_norm;
    r.residual_momentum = res.momentum_norm;
    r.residual_A11 = res.a11_norm;
    r.has_residuals = true;
  }
  return r;
}

}  // namespace kflock::diag
