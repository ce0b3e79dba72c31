#include "kineticflock/diagnostics/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kineticflock/error.hpp"
#include "kineticflock/kinetic/alignment.hpp"

namespace kflock::diag {

namespace {

// |d^k v|^2 for a spectral vector on f's layout.
double derivative_norm_sq(const SpectralField& layout, const Eigen::VectorXcd& v, int order) {
  double total = 0.0;
  for (int k = -layout.K(); k <= layout.K(); ++k) {
    total += std::pow(layout.wavenumber(k), 2 * order) * std::norm(v[k + layout.K()]);
  }
  return total;
}

double field_derivative_norm(const SpectralField& f, int order) {
  double total = 0.0;
  for (int k = -f.K(); k <= f.K(); ++k) total += std::pow(f.wavenumber(k), 2 * order) * f.mode(k).squaredNorm();
  return std::sqrt(total);
}

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

MacroRelations macro_relations(const SpectralField& f, const Collocation& grid, int s, double density_floor) {
  MacroRelations out;
  const Eigen::VectorXcd a = f.coeffs().row(0).transpose();
  const Eigen::VectorXcd b = f.coeffs().row(1).transpose();
  const Eigen::VectorXd u_grid = kinetic::compute_uF(f, grid, density_floor);
  // u is not band-limited; use every resolved grid mode.
  const Eigen::VectorXcd u_half = grid.half_spectrum(u_grid);
  for (int k = 0; k <= s; ++k) {
    const double ab = std::sqrt(derivative_norm_sq(f, a, k) + derivative_norm_sq(f, b, k));
    double u2 = std::norm(u_half[0]) * (k == 0 ? 1.0 : 0.0);
    for (Eigen::Index m = 1; m < u_half.size(); ++m) {
      const double kk = 2.0 * std::acos(-1.0) * static_cast<double>(m) / f.domain_length();
      const double weight = (m == u_half.size() - 1) ? 1.0 : 2.0;  // Nyquist counted once
      u2 += weight * std::pow(kk, 2 * k) * std::norm(u_half[m]);
    }
    out.ab_over_f.push_back(ratio(ab, field_derivative_norm(f, k)));
    out.u_over_ab.push_back(ratio(std::sqrt(u2), ab));
  }
  out.max_ab_over_f = *std::max_element(out.ab_over_f.begin(), out.ab_over_f.end());
  out.max_u_over_ab = *std::max_element(out.u_over_ab.begin(), out.u_over_ab.end());
  return out;
}

void RelationMonitor::update(const MacroRelations& r) {
  if (!started_) {
    initial_ab_ = r.max_ab_over_f;
    initial_u_ = r.max_u_over_ab;
    started_ = true;
  }
  max_ab_ = std::max(max_ab_, r.max_ab_over_f);
  max_u_ = std::max(max_u_, r.max_u_over_ab);
}

bool RelationMonitor::bounded(double factor) const {
  if (!std::isfinite(max_ab_) || !std::isfinite(max_u_)) return false;
  return max_ab_ <= factor * initial_ab_ + 1e-14 && max_u_ <= factor * initial_u_ + 1e-14;
}

double ell_bound_constant(const SpectralField& f, const Collocation& grid, int s, double density_floor) {
  const SpectralField g = micro_part(f);
  const auto [ell, r] = ell_and_r(f, grid, density_floor);
  const Eigen::VectorXcd A = moment_Aij(ell);
  double num = 0.0, den = 0.0;
  for (int k = 0; k <= s; ++k) {
    if (k < s) num += std::sqrt(derivative_norm_sq(f, A, k));
    den += field_derivative_norm(g, k);
  }
  return ratio(num, den);
}

double r_prefactor(const SpectralField& f, const Collocation& grid, int s, double density_floor) {
  const SpectralField g = micro_part(f);
  const auto [ell, r] = ell_and_r(f, grid, density_floor);
  double num = 0.0, den = 0.0;
  for (int k = 0; k <= s; ++k) {
    if (k < s) num += field_derivative_norm(r, k);
    den += field_derivative_norm(g, k);
  }
  return ratio(num, den);
}

DissipationFit fit_dissipation_constant(std::span<const EnergyReport> reports, double t_after, double tolerance,
                                        double required_fraction) {
  if (!(required_fraction > 0.0 && required_fraction <= 1.0)) {
    fail(ErrorKind::Config, "required fraction must lie in (0, 1]");
  }
  // Each step admits C5 <= (tol E - dE/dt) / D; C5 is the quantile of those caps.
  std::vector<double> caps;
  DissipationFit fit;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const EnergyReport& prev = reports[i - 1];
    const EnergyReport& cur = reports[i];
    if (cur.t <= t_after) continue;
    const double dt = cur.t - prev.t;
    if (!(dt > 0.0)) continue;
    const double slack = tolerance * cur.E_total - (cur.E_total - prev.E_total) / dt;
    if (cur.D_total > 0.0) {
      caps.push_back(slack / cur.D_total);
    } else {
      caps.push_back(slack >= 0.0 ? std::numeric_limits<double>::infinity()
                                  : -std::numeric_limits<double>::infinity());
      if (slack < 0.0) ++fit.hopeless;
    }
  }
  fit.steps = static_cast<int>(caps.size());
  if (caps.empty()) fail(ErrorKind::DegenerateSeries, "no steps after the transient");
  std::sort(caps.begin(), caps.end());
  // Allowed failures: the smallest floor((1 - fraction) n) caps may be violated.
  const auto allowed = static_cast<std::size_t>(std::floor((1.0 - required_fraction) * caps.size() + 1e-9));
  fit.C5 = caps[std::min(allowed, caps.size() - 1)];
  if (!std::isfinite(fit.C5)) fit.C5 = fit.C5 > 0 ? std::numeric_limits<double>::max() : fit.C5;
  const auto ok = std::count_if(caps.begin(), caps.end(), [&](double c) { return c >= fit.C5; });
  fit.fraction = static_cast<double>(ok) / static_cast<double>(caps.size());
  return fit;
}

}  // namespace kflock::diag
