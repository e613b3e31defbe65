#pragma once

// Empirical zero-set measures of individual realizations, and their average
// over many independent realizations.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "mixvol/estimator.hpp"
#include "mixvol/field.hpp"

namespace mixvol {

/// Roots of f in [lower, upper): sign changes on a uniform grid of grid_n
/// cells, each refined by bisection until |f| < tol.
std::size_t count_sign_changes(const std::function<double(double)>& f, double lower, double upper,
                               std::size_t grid_n, double tol);

/// d = k = 1. With self_check, recounts on 2 grid_n cells and throws
/// GridTooCoarse on disagreement.
std::size_t count_zeros_1d(const Realization& r, const Region& region, std::size_t grid_n,
                           double tol = 1e-12, bool self_check = false);

/// d = k = 2. Cells where both components change sign seed Newton's method;
/// converged roots are merged within 1e-6 and those inside [lower, upper)
/// are counted.
std::size_t count_zeros_2d(const Realization& r, const Region& region, std::size_t grid_n,
                           double tol = 1e-10, bool self_check = false);

/// Marching-squares length of {f = 0} in the region from node values on a
/// (grid_n + 1)^2 lattice; values(i, j) is f at (lower0 + i h0, lower1 + j h1).
double marching_squares_length(const Matrix& values, const Region& region);

/// Length of the nodal line of a scalar planar function.
double level_length_2d(const std::function<double(double, double)>& f, const Region& region,
                       std::size_t grid_n);

/// d = 2, k = 1. With self_check, throws GridTooCoarse when doubling the
/// grid moves the length by more than 1%.
double level_length_2d(const Realization& r, const Region& region, std::size_t grid_n,
                       bool self_check = false);

enum class ZeroStatistic { count_1d, count_2d, length_2d };

/// Picks the statistic for a field's (d, k); throws DimensionMismatch when
/// none applies.
ZeroStatistic statistic_for(const FieldSpec& spec);

struct EmpiricalConfig {
  std::size_t realizations = 1000;
  std::uint64_t seed = 0;
  std::size_t grid = 512;
  double tol = 1e-10;
  /// Recompute every realization on a doubled grid; GridTooCoarse when more
  /// than 1% of realizations disagree (counts) or move by more than 1% (length).
  bool self_check = false;
  double ci_level = 0.99;
  Execution execution = Execution::parallel;
  int threads = 0;
};

/// Per-realization zero measure; realization i uses RngStream{seed, i}.
std::vector<double> sample_zero_measures(const FieldSpec& spec, const Region& region,
                                         const EmpiricalConfig& cfg);

MCEstimate empirical_zero_measure(const FieldSpec& spec, const Region& region,
                                  const EmpiricalConfig& cfg);

/// Mean and standard error of an explicit sample.
MCEstimate summarize(const std::vector<double>& values, std::uint64_t seed, double ci_level);

}  // namespace mixvol
