#include "mixvol/mixed_discriminant.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "mixvol/error.hpp"

namespace mixvol {

namespace {

// Neumaier compensated summation, in index order.
double compensated_sum(const std::vector<double>& terms) {
  double sum = 0.0;
  double carry = 0.0;
  for (double t : terms) {
    const double next = sum + t;
    if (std::abs(sum) >= std::abs(t)) {
      carry += (sum - next) + t;
    } else {
      carry += (t - next) + sum;
    }
    sum = next;
  }
  return sum + carry;
}

}  // namespace

double determinant(const Matrix& m) { return m.partialPivLu().determinant(); }

double mixed_discriminant(std::span<const Matrix> matrices, Execution execution) {
  const auto count = matrices.size();
  if (count == 0) {
    throw Error(ErrorCode::DimensionMismatch, "need at least one matrix");
  }
  const auto d = matrices.front().rows();
  if (static_cast<Eigen::Index>(count) != d) {
    throw Error(ErrorCode::DimensionMismatch,
                "need exactly d matrices of size d x d, got " + std::to_string(count) +
                    " matrices of size " + std::to_string(d));
  }
  if (d > kMaxDim) {
    throw Error(ErrorCode::OutOfRange, "mixed discriminant supports d <= 16");
  }
  for (const auto& m : matrices) {
    if (m.rows() != d || m.cols() != d) {
      throw Error(ErrorCode::DimensionMismatch, "all matrices must be d x d");
    }
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = i + 1; j < d; ++j) {
        if (std::abs(m(i, j) - m(j, i)) > kSymmetryTol * std::max(1.0, std::abs(m(i, j)))) {
          throw Error(ErrorCode::NotSymmetric, "mixed discriminant input is not symmetric");
        }
      }
    }
  }

  // Centred polarization: with e_i = +-1,
  //   D = (1 / (2^d d!)) sum_e (prod e_i) det(sum e_i A_i).
  // Same multilinear coefficient as the subset expansion around the origin,
  // but the sums are centred, so terms are ~2^d smaller and cancel less.
  // e and -e give equal terms; fix e_0 = +1 and halve the count.
  const auto half = std::uint32_t{1} << (d - 1);
  std::vector<double> terms(half);
  for_each_chunk(half, execution, 0, [&](std::size_t idx) {
    const auto mask = static_cast<std::uint32_t>(idx);
    Matrix sum = matrices[0];
    for (Eigen::Index i = 1; i < d; ++i) {
      if (mask & (std::uint32_t{1} << (i - 1))) {
        sum -= matrices[static_cast<std::size_t>(i)];
      } else {
        sum += matrices[static_cast<std::size_t>(i)];
      }
    }
    const double sign = (std::popcount(mask) % 2 == 0) ? 1.0 : -1.0;
    terms[idx] = sign * determinant(sum);
  });

  const double scale = std::ldexp(static_cast<double>(falling_factorial(static_cast<int>(d), static_cast<int>(d))),
                                  static_cast<int>(d - 1));
  return compensated_sum(terms) / scale;
}

BarvinokBounds barvinok_bounds(std::span<const Ellipsoid> ellipsoids) {
  if (ellipsoids.empty() || static_cast<int>(ellipsoids.size()) != ellipsoids.front().dim()) {
    throw Error(ErrorCode::DimensionMismatch, "need exactly d ellipsoids in R^d");
  }
  std::vector<Matrix> sigmas;
  sigmas.reserve(ellipsoids.size());
  for (const auto& e : ellipsoids) {
    if (e.dim() != ellipsoids.front().dim()) {
      throw Error(ErrorCode::DimensionMismatch, "ellipsoids live in different dimensions");
    }
    sigmas.push_back(e.sigma().entries());
  }
  const int d = ellipsoids.front().dim();
  BarvinokBounds out;
  out.discriminant = mixed_discriminant(sigmas);
  if (!(out.discriminant >= 0.0)) {
    throw Error(ErrorCode::NegativeDiscriminant,
                "mixed discriminant of positive-definite inputs came out negative");
  }
  const double root = std::sqrt(out.discriminant);
  out.upper = unit_ball_volume(d) * root;
  out.lower = out.upper / std::pow(3.0, 0.5 * (d - 1));
  return out;
}

}  // namespace mixvol
