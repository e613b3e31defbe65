#pragma once

// Deterministic planar mixed areas from support functions.
//
// Area(K) = 1/2 \int_0^{2pi} (h^2 - h'^2) dtheta, h_{K+L} = h_K + h_L, and
// V_2(K, L) = (Area(K + L) - Area(K) - Area(L)) / 2. The trapezoid rule on a
// uniform grid converges spectrally for these periodic integrands.

#include <array>
#include <functional>
#include <span>

#include "mixvol/geometry.hpp"

namespace mixvol {

struct SupportBody2D {
  std::function<double(double)> h;
  std::function<double(double)> h_prime;
};

/// Analytic h(theta) = sqrt(u^T Sigma u) and h' = u'^T Sigma u / h, u = (cos, sin).
SupportBody2D support_body(const Ellipsoid& e);

/// Support function of a K + b L.
SupportBody2D minkowski_combination(const SupportBody2D& K, double a, const SupportBody2D& L,
                                    double b);

/// Throws NonConvexBody if h + h'' < -1e-8 at a grid node, OutOfRange for
/// n_nodes < 64 or odd.
double area_from_support(const SupportBody2D& body, int n_nodes = 4096);

double mixed_area_oracle(const Ellipsoid& e1, const Ellipsoid& e2, int n_nodes = 4096);

struct MinkowskiFit {
  double c20 = 0.0;
  double c11 = 0.0;
  double c02 = 0.0;
  /// Largest |fit - area| over the grid, relative to the largest area.
  double residual = 0.0;
};

/// Least-squares fit of Area(l1 K1 + l2 K2) = c20 l1^2 + c11 l1 l2 + c02 l2^2.
/// Throws IllConditionedFit when the grid does not determine the coefficients.
MinkowskiFit minkowski_poly_check(const Ellipsoid& e1, const Ellipsoid& e2,
                                  std::span<const std::array<double, 2>> lambda_grid,
                                  int n_nodes = 4096);

}  // namespace mixvol
