#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mixvol/estimator.hpp"
#include "mixvol/geometry.hpp"
#include "mixvol/rng.hpp"

namespace mixvol {

/// Centered Gaussian vector N(0, covariance).
struct GaussianVectorSpec {
  SPDMatrix covariance;
};

/// k independent Gaussian rows in R^d, 1 <= k <= d.
class MatrixEnsemble {
 public:
  explicit MatrixEnsemble(std::vector<GaussianVectorSpec> specs);

  int rows() const noexcept { return static_cast<int>(specs_.size()); }
  int dim() const noexcept { return specs_.front().covariance.dim(); }
  const std::vector<GaussianVectorSpec>& specs() const noexcept { return specs_; }

 private:
  std::vector<GaussianVectorSpec> specs_;
};

/// factor * z with z drawn from `gen`.
Vector sample_gaussian(const GaussianVectorSpec& spec, NormalGenerator& gen);

/// k-volume of the parallelotope spanned by the rows of `rows` (k x d),
/// via Householder LQ. Linearly dependent rows give exactly 0.
double gram_volume(const Matrix& rows);

namespace detail {

/// In-place variant on a row-major k x d buffer, which it overwrites.
double gram_volume_inplace(std::span<double> a, std::size_t k, std::size_t d) noexcept;

/// Kernel mapping k*d standard normals to gram_volume of the sampled M.
class GramKernel {
 public:
  explicit GramKernel(const MatrixEnsemble& ensemble);

  std::size_t draws() const noexcept { return k_ * d_; }
  double operator()(std::span<const double> z) noexcept;

 private:
  std::size_t k_;
  std::size_t d_;
  std::vector<double> factors_;  // k lower factors, row-major d x d each
  std::vector<double> rows_;
};

}  // namespace detail

/// Monte Carlo E sqrt(det(M M^T)) for M drawn from the ensemble.
MCEstimate expected_gram_volume(const MatrixEnsemble& ensemble, const McConfig& cfg);

}  // namespace mixvol
