#include "mixvol/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mixvol/error.hpp"

namespace mixvol {

namespace {

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

SPDMatrix make_spd(const Matrix& entries) {
  const auto d = entries.rows();
  if (d == 0 || d != entries.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix must be square and non-empty");
  }
  if (d > kMaxDim) {
    throw Error(ErrorCode::DimensionMismatch,
                "dimension " + std::to_string(d) + " exceeds " + std::to_string(kMaxDim));
  }
  if (!entries.allFinite()) {
    throw Error(ErrorCode::NotPositiveDefinite, "matrix has non-finite entries");
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double a = entries(i, j);
      const double b = entries(j, i);
      if (std::abs(a - b) > kSymmetryTol * std::max(1.0, std::abs(a))) {
        std::ostringstream msg;
        msg << "entries (" << i << "," << j << ")=" << a << " and (" << j << "," << i
            << ")=" << b << " differ";
        throw Error(ErrorCode::NotSymmetric, msg.str());
      }
    }
  }

  Matrix sym = symmetrized(entries);
  Eigen::LLT<Matrix> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "Cholesky factorization hit a non-positive pivot");
  }
  Matrix factor = llt.matrixL();
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!(factor(i, i) > 0.0)) {
      throw Error(ErrorCode::NotPositiveDefinite, "Cholesky pivot is not positive");
    }
  }
  const double scale = std::max(sym.cwiseAbs().maxCoeff(), 1e-300);
  const double residual = (factor * factor.transpose() - sym).cwiseAbs().maxCoeff();
  if (residual > kFactorResidualTol * scale) {
    throw Error(ErrorCode::NotPositiveDefinite, "Cholesky factor does not reproduce the matrix");
  }
  return SPDMatrix(std::move(sym), std::move(factor));
}

double SPDMatrix::determinant() const {
  const double diag = factor_.diagonal().prod();
  return diag * diag;
}

double SPDMatrix::condition_number() const {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(entries_, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  return ev.maxCoeff() / ev.minCoeff();
}

Ellipsoid Ellipsoid::ball(int dim, double radius) {
  return Ellipsoid(make_spd(Matrix::Identity(dim, dim) * (radius * radius)));
}

double Ellipsoid::volume() const {
  return unit_ball_volume(dim()) * std::sqrt(sigma_.determinant());
}

double unit_ball_volume(int n) {
  if (n < 0) {
    throw Error(ErrorCode::OutOfRange, "unit ball dimension must be non-negative");
  }
  const double half = 0.5 * n;
  return std::pow(std::numbers::pi, half) / std::tgamma(1.0 + half);
}

std::int64_t falling_factorial(int d, int k) {
  if (d < 0 || k < 0 || k > d) {
    throw Error(ErrorCode::OutOfRange,
                "falling factorial needs 0 <= k <= d, got d=" + std::to_string(d) +
                    " k=" + std::to_string(k));
  }
  std::int64_t out = 1;
  for (int i = 0; i < k; ++i) out *= d - i;
  return out;
}

Ellipsoid transform_ellipsoid(const Ellipsoid& e, const Matrix& L) {
  const int d = e.dim();
  if (L.rows() != d || L.cols() != d) {
    throw Error(ErrorCode::DimensionMismatch, "transform must be d x d");
  }
  const double scale = L.cwiseAbs().maxCoeff();
  const double det = L.partialPivLu().determinant();
  if (!(std::abs(det) > 1e-12 * std::pow(scale, d))) {
    throw Error(ErrorCode::SingularTransform, "transform is singular");
  }
  return Ellipsoid(make_spd(symmetrized(L * e.sigma().entries() * L.transpose())));
}

Ellipsoid project_ellipsoid(const Ellipsoid& e, const Matrix& basis) {
  const int d = e.dim();
  const auto k = basis.rows();
  if (basis.cols() != d || k < 1 || k > d) {
    throw Error(ErrorCode::DimensionMismatch, "basis must be k x d with 1 <= k <= d");
  }
  const double dev = (basis * basis.transpose() - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
  if (dev > kUnitTol) {
    throw Error(ErrorCode::NonOrthonormalBasis, "basis rows are not orthonormal");
  }
  return Ellipsoid(make_spd(symmetrized(basis * e.sigma().entries() * basis.transpose())));
}

double support_function(const Ellipsoid& e, const Vector& u) {
  if (u.size() != e.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "direction has wrong dimension");
  }
  if (std::abs(u.norm() - 1.0) > kUnitTol) {
    throw Error(ErrorCode::NotUnitVector, "direction must have unit length");
  }
  return std::sqrt(u.dot(e.sigma().entries() * u));
}

}  // namespace mixvol
