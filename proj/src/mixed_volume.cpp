#include "mixvol/mixed_volume.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "mixvol/error.hpp"
#include "mixvol/gaussian_mc.hpp"

namespace mixvol {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_conditioning(const Ellipsoid& e) {
  const double cond = e.sigma().condition_number();
  if (!(cond <= kMaxConditionNumber)) {
    throw Error(ErrorCode::IllConditioned,
                "ellipsoid condition number " + std::to_string(cond) + " exceeds 1e12");
  }
}

MatrixEnsemble ensemble_of(std::span<const Ellipsoid> ellipsoids) {
  if (ellipsoids.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "at least one ellipsoid is required");
  }
  const int d = ellipsoids.front().dim();
  std::vector<GaussianVectorSpec> specs;
  specs.reserve(ellipsoids.size());
  for (const auto& e : ellipsoids) {
    if (e.dim() != d) {
      throw Error(ErrorCode::DimensionMismatch, "ellipsoids live in different dimensions");
    }
    check_conditioning(e);
    specs.push_back({e.sigma()});
  }
  if (static_cast<int>(specs.size()) > d) {
    throw Error(ErrorCode::DimensionMismatch, "more ellipsoids than the ambient dimension");
  }
  return MatrixEnsemble(std::move(specs));
}

class NormKernel {
 public:
  explicit NormKernel(const Matrix& factor) : d_(static_cast<std::size_t>(factor.rows())), f_(factor) {}

  double operator()(std::span<const double> z) const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < d_; ++i) {
      double xi = 0.0;
      for (std::size_t j = 0; j <= i; ++j) xi += f_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * z[j];
      s += xi * xi;
    }
    return std::sqrt(s);
  }

 private:
  std::size_t d_;
  Matrix f_;
};

class MaxDotKernel {
 public:
  explicit MaxDotKernel(const Matrix& points) : n_(static_cast<std::size_t>(points.rows())), d_(static_cast<std::size_t>(points.cols())), flat_(n_ * d_) {
    for (std::size_t p = 0; p < n_; ++p) {
      for (std::size_t j = 0; j < d_; ++j) flat_[p * d_ + j] = points(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(j));
    }
  }

  double operator()(std::span<const double> eta) const noexcept {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < n_; ++p) {
      const double* x = &flat_[p * d_];
      double s = 0.0;
      for (std::size_t j = 0; j < d_; ++j) s += x[j] * eta[j];
      best = std::max(best, s);
    }
    return best;
  }

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<double> flat_;
};

}  // namespace

MCEstimate mixed_volume_with_balls(std::span<const Ellipsoid> ellipsoids, const McConfig& cfg) {
  const MatrixEnsemble ensemble = ensemble_of(ellipsoids);
  const int d = ensemble.dim();
  const int k = ensemble.rows();
  const double scale = std::pow(kTwoPi, 0.5 * k) * unit_ball_volume(d - k) /
                       static_cast<double>(falling_factorial(d, k));
  return expected_gram_volume(ensemble, cfg).scaled(scale);
}

MCEstimate mixed_volume_full(std::span<const Ellipsoid> ellipsoids, const McConfig& cfg) {
  if (ellipsoids.empty() || static_cast<int>(ellipsoids.size()) != ellipsoids.front().dim()) {
    throw Error(ErrorCode::DimensionMismatch, "need exactly d ellipsoids in R^d");
  }
  return mixed_volume_with_balls(ellipsoids, cfg);
}

MCEstimate intrinsic_volume(const Ellipsoid& e, int k, const McConfig& cfg) {
  const int d = e.dim();
  if (k < 1 || k > d) {
    throw Error(ErrorCode::OutOfRange,
                "intrinsic volume index must lie in [1, " + std::to_string(d) + "]");
  }
  check_conditioning(e);
  const MatrixEnsemble ensemble(std::vector<GaussianVectorSpec>(static_cast<std::size_t>(k), {e.sigma()}));
  const double scale = std::pow(kTwoPi, 0.5 * k) / static_cast<double>(falling_factorial(k, k));
  return expected_gram_volume(ensemble, cfg).scaled(scale);
}

MCEstimate mean_width(const Ellipsoid& e, const McConfig& cfg) {
  const int d = e.dim();
  const double scale = 2.0 * unit_ball_volume(d - 1) / (d * unit_ball_volume(d));
  return intrinsic_volume(e, 1, cfg).scaled(scale);
}

ExpectedNorm expected_norm(const Ellipsoid& e, const McConfig& cfg) {
  check_conditioning(e);
  ExpectedNorm out;
  out.direct = estimate_mean(NormKernel(e.sigma().factor()), static_cast<std::size_t>(e.dim()), cfg);

  McConfig other = cfg;
  other.stream_offset += std::uint64_t{1} << 40;
  out.via_intrinsic = intrinsic_volume(e, 1, other).scaled(1.0 / std::sqrt(kTwoPi));
  return out;
}

SudakovWidth sudakov_width(const Matrix& points, const McConfig& cfg) {
  if (points.rows() == 0 || points.cols() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "point cloud must be non-empty");
  }
  if (!points.allFinite()) {
    throw Error(ErrorCode::InvalidInput, "point cloud has non-finite coordinates");
  }
  SudakovWidth out;
  out.expected_sup = estimate_mean(MaxDotKernel(points), static_cast<std::size_t>(points.cols()), cfg);
  out.implied_v1 = out.expected_sup.scaled(std::sqrt(kTwoPi));
  return out;
}

}  // namespace mixvol
