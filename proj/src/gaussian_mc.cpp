#include "mixvol/gaussian_mc.hpp"

#include <cmath>

#include "mixvol/error.hpp"

namespace mixvol {

MatrixEnsemble::MatrixEnsemble(std::vector<GaussianVectorSpec> specs) : specs_(std::move(specs)) {
  if (specs_.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "ensemble needs at least one row");
  }
  const int d = specs_.front().covariance.dim();
  for (const auto& s : specs_) {
    if (s.covariance.dim() != d) {
      throw Error(ErrorCode::DimensionMismatch, "all rows must share one dimension");
    }
  }
  if (rows() > d) {
    throw Error(ErrorCode::DimensionMismatch, "more rows than the ambient dimension");
  }
}

Vector sample_gaussian(const GaussianVectorSpec& spec, NormalGenerator& gen) {
  Vector z(spec.covariance.dim());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = gen();
  return spec.covariance.factor().triangularView<Eigen::Lower>() * z;
}

namespace detail {

double gram_volume_inplace(std::span<double> a, std::size_t k, std::size_t d) noexcept {
  double scale = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += a[i * d + j] * a[i * d + j];
    scale = std::max(scale, std::sqrt(s));
  }
  if (scale == 0.0) return 0.0;
  const double floor = 64.0 * static_cast<double>(d) * 0x1.0p-52 * scale;

  double volume = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    double* row = &a[j * d];
    double norm2 = 0.0;
    for (std::size_t c = j; c < d; ++c) norm2 += row[c] * row[c];
    const double norm = std::sqrt(norm2);
    if (norm <= floor) return 0.0;
    volume *= norm;
    if (j + 1 == k) break;

    // Reflector v = x - alpha e_j with alpha = -sign(x_j) |x|; v^T v = 2 |x| (|x| + |x_j|).
    const double alpha = row[j] >= 0.0 ? -norm : norm;
    row[j] -= alpha;
    const double vnorm2 = 2.0 * norm * (norm + std::abs(row[j] + alpha));
    for (std::size_t i = j + 1; i < k; ++i) {
      double* other = &a[i * d];
      double dot = 0.0;
      for (std::size_t c = j; c < d; ++c) dot += other[c] * row[c];
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t c = j; c < d; ++c) other[c] -= f * row[c];
    }
  }
  return volume;
}

GramKernel::GramKernel(const MatrixEnsemble& ensemble)
    : k_(static_cast<std::size_t>(ensemble.rows())),
      d_(static_cast<std::size_t>(ensemble.dim())),
      factors_(k_ * d_ * d_),
      rows_(k_ * d_) {
  for (std::size_t r = 0; r < k_; ++r) {
    const Matrix& f = ensemble.specs()[r].covariance.factor();
    for (std::size_t i = 0; i < d_; ++i) {
      for (std::size_t j = 0; j < d_; ++j) {
        factors_[r * d_ * d_ + i * d_ + j] = j <= i ? f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) : 0.0;
      }
    }
  }
}

double GramKernel::operator()(std::span<const double> z) noexcept {
  for (std::size_t r = 0; r < k_; ++r) {
    const double* f = &factors_[r * d_ * d_];
    const double* zr = &z[r * d_];
    double* out = &rows_[r * d_];
    for (std::size_t i = 0; i < d_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j <= i; ++j) s += f[i * d_ + j] * zr[j];
      out[i] = s;
    }
  }
  return gram_volume_inplace(rows_, k_, d_);
}

}  // namespace detail

double gram_volume(const Matrix& rows) {
  const auto k = static_cast<std::size_t>(rows.rows());
  const auto d = static_cast<std::size_t>(rows.cols());
  if (k == 0 || k > d) {
    throw Error(ErrorCode::DimensionMismatch, "gram_volume needs 1 <= k <= d rows");
  }
  std::vector<double> buf(k * d);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < d; ++j) buf[i * d + j] = rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return detail::gram_volume_inplace(buf, k, d);
}

MCEstimate expected_gram_volume(const MatrixEnsemble& ensemble, const McConfig& cfg) {
  detail::GramKernel kernel(ensemble);
  return estimate_mean(kernel, kernel.draws(), cfg);
}

}  // namespace mixvol
