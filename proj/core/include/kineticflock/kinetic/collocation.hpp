#pragma once

#include <Eigen/Dense>

#include <memory>

namespace kflock::kinetic {

/// Uniform periodic grid used for pointwise products. Band-limited fields with
/// |k| <= K are sampled on M >= 3K + 1 points (a power of two), so quadratic
/// products are alias-free once truncated back to |k| <= K.
///
/// Spectral vectors have length 2K + 1 with entry k + K holding mode k and are
/// assumed Hermitian; only k >= 0 is read on the way to the grid.
class Collocation {
 public:
  Collocation(int K, double domain_length, int min_points = 0);
  ~Collocation();
  Collocation(const Collocation&) = delete;
  Collocation& operator=(const Collocation&) = delete;
  Collocation(Collocation&&) noexcept;
  Collocation& operator=(Collocation&&) noexcept;

  int K() const noexcept { return K_; }
  int points() const noexcept { return points_; }
  double domain_length() const noexcept { return length_; }
  double dx() const noexcept { return length_ / points_; }
  double node(int j) const noexcept { return j * dx(); }

  Eigen::VectorXd to_grid(const Eigen::Ref<const Eigen::VectorXcd>& spectral) const;
  /// Discrete Fourier coefficients of grid samples, truncated to |k| <= K.
  Eigen::VectorXcd from_grid(const Eigen::Ref<const Eigen::VectorXd>& grid) const;
  /// Full half-spectrum (k = 0..M/2) of grid samples, scaled by 1/M.
  Eigen::VectorXcd half_spectrum(const Eigen::Ref<const Eigen::VectorXd>& grid) const;

  /// Row-wise versions: each row of `spectral` is one spectral vector.
  Eigen::MatrixXd rows_to_grid(const Eigen::MatrixXcd& spectral, int threads = 1) const;
  Eigen::MatrixXcd rows_from_grid(const Eigen::MatrixXd& grid, int threads = 1) const;

 private:
  struct Plans;
  int K_;
  int points_;
  double length_;
  std::unique_ptr<Plans> plans_;
};

/// Circular convolution (k * g)_j = sum_l k_{j-l} g_l of two equal-length
/// periodic sequences, through real FFTs.
Eigen::VectorXd circular_convolution(const Eigen::VectorXd& kernel, const Eigen::VectorXd& data);

/// Smallest power of two >= n.
int next_power_of_two(int n);

}  // namespace kflock::kinetic
