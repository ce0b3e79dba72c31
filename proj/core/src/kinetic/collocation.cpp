#include "kineticflock/kinetic/collocation.hpp"

#include <fftw3.h>

#include <complex>
#include <mutex>

#include "kineticflock/error.hpp"
#include "kineticflock/util/parallel.hpp"

namespace kflock::kinetic {

namespace {

// The FFTW planner is not thread-safe; execution on fresh arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(int n_real)
      : real(fftw_alloc_real(static_cast<std::size_t>(n_real))),
        spec(fftw_alloc_complex(static_cast<std::size_t>(n_real / 2 + 1))) {}
  ~FftwBuffer() {
    fftw_free(real);
    fftw_free(spec);
  }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  double* real;
  fftw_complex* spec;
};

}  // namespace

struct Collocation::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

int next_power_of_two(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

Collocation::Collocation(int K, double domain_length, int min_points)
    : K_(K), points_(next_power_of_two(std::max({3 * K + 1, min_points, 4}))), length_(domain_length) {
  if (K < 0) fail(ErrorKind::Config, "K must be >= 0");
  if (!(domain_length > 0.0)) fail(ErrorKind::Config, "domain length must be positive");
  plans_ = std::make_unique<Plans>();
  FftwBuffer scratch(points_);
  std::lock_guard lock(planner_mutex());
  plans_->forward = fftw_plan_dft_r2c_1d(points_, scratch.real, scratch.spec, FFTW_ESTIMATE);
  plans_->backward = fftw_plan_dft_c2r_1d(points_, scratch.spec, scratch.real, FFTW_ESTIMATE);
}

Collocation::~Collocation() = default;
Collocation::Collocation(Collocation&&) noexcept = default;
Collocation& Collocation::operator=(Collocation&&) noexcept = default;

Eigen::VectorXd Collocation::to_grid(const Eigen::Ref<const Eigen::VectorXcd>& spectral) const {
  if (spectral.size() != 2 * K_ + 1) fail(ErrorKind::Shape, "spectral vector must have 2K+1 entries");
  FftwBuffer buf(points_);
  const int half = points_ / 2 + 1;
  for (int k = 0; k < half; ++k) buf.spec[k][0] = buf.spec[k][1] = 0.0;
  for (int k = 0; k <= K_; ++k) {
    buf.spec[k][0] = spectral[k + K_].real();
    buf.spec[k][1] = spectral[k + K_].imag();
  }
  // c2r assumes a real Nyquist entry; K < M/2 keeps it empty.
  fftw_execute_dft_c2r(plans_->backward, buf.spec, buf.real);
  return Eigen::Map<Eigen::VectorXd>(buf.real, points_);
}

Eigen::VectorXcd Collocation::half_spectrum(const Eigen::Ref<const Eigen::VectorXd>& grid) const {
  if (grid.size() != points_) fail(ErrorKind::Shape, "grid vector has the wrong number of points");
  FftwBuffer buf(points_);
  for (int j = 0; j < points_; ++j) buf.real[j] = grid[j];
  fftw_execute_dft_r2c(plans_->forward, buf.real, buf.spec);
  const int half = points_ / 2 + 1;
  Eigen::VectorXcd out(half);
  const double scale = 1.0 / points_;
  for (int k = 0; k < half; ++k) out[k] = scale * std::complex<double>(buf.spec[k][0], buf.spec[k][1]);
  return out;
}

Eigen::VectorXcd Collocation::from_grid(const Eigen::Ref<const Eigen::VectorXd>& grid) const {
  const Eigen::VectorXcd half = half_spectrum(grid);
  Eigen::VectorXcd out(2 * K_ + 1);
  out[K_] = std::complex<double>(half[0].real(), 0.0);
  for (int k = 1; k <= K_; ++k) {
    out[K_ + k] = half[k];
    out[K_ - k] = std::conj(half[k]);
  }
  return out;
}

Eigen::MatrixXd Collocation::rows_to_grid(const Eigen::MatrixXcd& spectral, int threads) const {
  Eigen::MatrixXd out(spectral.rows(), points_);
  parallel_for(spectral.rows(), threads, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    for (std::ptrdiff_t r = lo; r < hi; ++r) out.row(r) = to_grid(spectral.row(r).transpose()).transpose();
  });
  return out;
}

Eigen::MatrixXcd Collocation::rows_from_grid(const Eigen::MatrixXd& grid, int threads) const {
  Eigen::MatrixXcd out(grid.rows(), 2 * K_ + 1);
  parallel_for(grid.rows(), threads, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    for (std::ptrdiff_t r = lo; r < hi; ++r) out.row(r) = from_grid(grid.row(r).transpose()).transpose();
  });
  return out;
}

Eigen::VectorXd circular_convolution(const Eigen::VectorXd& kernel, const Eigen::VectorXd& data) {
  if (kernel.size() != data.size() || data.size() < 1) {
    fail(ErrorKind::Shape, "circular convolution needs equal, nonzero lengths");
  }
  const int n = static_cast<int>(data.size());
  const int half = n / 2 + 1;
  FftwBuffer kb(n), db(n);
  fftw_plan forward, backward;
  {
    std::lock_guard lock(planner_mutex());
    forward = fftw_plan_dft_r2c_1d(n, kb.real, kb.spec, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(n, db.spec, db.real, FFTW_ESTIMATE);
  }
  for (int j = 0; j < n; ++j) {
    kb.real[j] = kernel[j];
    db.real[j] = data[j];
  }
  fftw_execute_dft_r2c(forward, kb.real, kb.spec);
  fftw_execute_dft_r2c(forward, db.real, db.spec);
  for (int k = 0; k < half; ++k) {
    const std::complex<double> p = std::complex<double>(kb.spec[k][0], kb.spec[k][1]) *
                                   std::complex<double>(db.spec[k][0], db.spec[k][1]) / static_cast<double>(n);
    db.spec[k][0] = p.real();
    db.spec[k][1] = p.imag();
  }
  fftw_execute_dft_c2r(backward, db.spec, db.real);
  Eigen::VectorXd out = Eigen::Map<Eigen::VectorXd>(db.real, n);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  return out;
}

}  // namespace kflock::kinetic
