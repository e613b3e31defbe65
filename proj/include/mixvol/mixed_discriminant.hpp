#pragma once

#include <span>

#include "mixvol/estimator.hpp"
#include "mixvol/geometry.hpp"

namespace mixvol {

/// D_d(A_1, ..., A_d), the multilinear coefficient of det(sum l_i A_i):
///   D_d = (1/d!) sum_S (-1)^{d-|S|} det(sum_{i in S} A_i),
/// evaluated in the centred +-1 form over 2^{d-1} sign vectors.
/// Matrices must be symmetric d x d; positive-definiteness is not required.
double mixed_discriminant(std::span<const Matrix> matrices,
                          Execution execution = Execution::parallel);

/// LU with partial pivoting.
double determinant(const Matrix& m);

struct BarvinokBounds {
  double lower = 0.0;
  double upper = 0.0;
  double discriminant = 0.0;
};

/// kappa_d 3^{-(d-1)/2} sqrt(D) <= V_d(E_1..E_d) <= kappa_d sqrt(D),
/// D the mixed discriminant of the representing matrices.
BarvinokBounds barvinok_bounds(std::span<const Ellipsoid> ellipsoids);

}  // namespace mixvol
