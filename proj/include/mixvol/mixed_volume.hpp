#pragma once

// Mixed volumes of centered ellipsoids from Gaussian random determinants.
//
// For rows xi_i ~ N(0, Sigma_i), i = 1..k, in R^d:
//   E sqrt(det M M^T) = (d)_k / ((2 pi)^{k/2} kappa_{d-k}) * V_d(E_1..E_k, B..B)
// where E_i is the ellipsoid with representing matrix Sigma_i. Every
// estimator below rescales expected_gram_volume().

#include <span>

#include "mixvol/estimator.hpp"
#include "mixvol/geometry.hpp"

namespace mixvol {

/// Ellipsoids past this condition number are rejected as near-degenerate.
inline constexpr double kMaxConditionNumber = 1e12;

/// V_d(E_1, ..., E_k, B, ..., B) with d - k unit-ball slots.
MCEstimate mixed_volume_with_balls(std::span<const Ellipsoid> ellipsoids, const McConfig& cfg);

/// V_d(E_1, ..., E_d); needs exactly d ellipsoids in R^d.
MCEstimate mixed_volume_full(std::span<const Ellipsoid> ellipsoids, const McConfig& cfg);

/// k-th intrinsic volume, 1 <= k <= d.
MCEstimate intrinsic_volume(const Ellipsoid& e, int k, const McConfig& cfg);

/// Mean width 2 kappa_{d-1} / (d kappa_d) * V_1.
MCEstimate mean_width(const Ellipsoid& e, const McConfig& cfg);

struct ExpectedNorm {
  /// Plain Monte Carlo E|xi| for xi ~ N(0, Sigma).
  MCEstimate direct;
  /// V_1(E) / sqrt(2 pi), estimated on disjoint streams.
  MCEstimate via_intrinsic;
};

ExpectedNorm expected_norm(const Ellipsoid& e, const McConfig& cfg);

struct SudakovWidth {
  /// E max_x <x, eta> over the cloud, eta standard normal.
  MCEstimate expected_sup;
  /// sqrt(2 pi) * expected_sup = V_1(conv A).
  MCEstimate implied_v1;
};

/// `points` holds one point per row.
SudakovWidth sudakov_width(const Matrix& points, const McConfig& cfg);

}  // namespace mixvol
