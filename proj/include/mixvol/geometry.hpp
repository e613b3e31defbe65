#pragma once

// Exact deterministic geometry of centered ellipsoids.
//
// An ellipsoid is stored through its representing matrix Sigma; the body is
// {x : x^T Sigma^{-1} x <= 1}. The same matrix is the covariance of the
// Gaussian vector whose location-dispersion ellipsoid it is, so samplers use
// it directly.

#include <cstdint>

#include <Eigen/Dense>

namespace mixvol {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr int kMaxDim = 16;

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kFactorResidualTol = 1e-10;
inline constexpr double kUnitTol = 1e-10;

/// Symmetric positive-definite matrix with its lower Cholesky factor cached.
/// Immutable once built; obtain one through make_spd().
class SPDMatrix {
 public:
  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const noexcept { return entries_; }
  /// Lower-triangular L with L L^T == entries().
  const Matrix& factor() const noexcept { return factor_; }

  double determinant() const;
  /// Ratio of extreme eigenvalues.
  double condition_number() const;

 private:
  friend SPDMatrix make_spd(const Matrix& entries);
  SPDMatrix(Matrix entries, Matrix factor)
      : entries_(std::move(entries)), factor_(std::move(factor)) {}

  Matrix entries_;
  Matrix factor_;
};

/// Validates symmetry and positive-definiteness.
/// Throws NotSymmetric, NotPositiveDefinite, or DimensionMismatch (non-square,
/// empty, or larger than kMaxDim).
SPDMatrix make_spd(const Matrix& entries);

class Ellipsoid {
 public:
  explicit Ellipsoid(SPDMatrix sigma) : sigma_(std::move(sigma)) {}

  static Ellipsoid ball(int dim, double radius = 1.0);
  static Ellipsoid from_matrix(const Matrix& sigma) { return Ellipsoid(make_spd(sigma)); }

  int dim() const noexcept { return sigma_.dim(); }
  const SPDMatrix& sigma() const noexcept { return sigma_; }
  /// Lebesgue volume kappa_d * sqrt(det Sigma).
  double volume() const;

 private:
  SPDMatrix sigma_;
};

/// kappa_n = pi^{n/2} / Gamma(1 + n/2).
double unit_ball_volume(int n);

/// d (d-1) ... (d-k+1); 1 for k == 0. Throws OutOfRange unless 0 <= k <= d.
std::int64_t falling_factorial(int d, int k);

/// Image of e under x -> L x; representing matrix L Sigma L^T.
Ellipsoid transform_ellipsoid(const Ellipsoid& e, const Matrix& L);

/// Orthogonal projection onto the span of the (orthonormal) rows of `basis`,
/// expressed in that basis: C Sigma C^T.
Ellipsoid project_ellipsoid(const Ellipsoid& e, const Matrix& basis);

/// h(u) = sqrt(u^T Sigma u) for a unit vector u.
double support_function(const Ellipsoid& e, const Vector& u);

}  // namespace mixvol
