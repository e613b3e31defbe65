#pragma once

// Smooth centered Gaussian fields X : R^d -> R^k with independent
// coordinates, each a finite sum of covariance atoms:
//   trig atom (w, omega):        w cos<omega, s - t>      (any d, stationary)
//   polynomial atom (w, j):      w s^j t^j                 (d = 1 only)
// Realizations are exact: sqrt(w) (a cos<omega,t> + b sin<omega,t>) per trig
// atom and sqrt(w) c t^j per polynomial atom, with a, b, c standard normal.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "mixvol/estimator.hpp"
#include "mixvol/geometry.hpp"
#include "mixvol/rng.hpp"

namespace mixvol {

enum class KernelKind { trig, polynomial };

struct KernelAtom {
  double weight = 1.0;
  Vector frequency;  // trig only, size d
  int degree = 0;    // polynomial only
};

struct KernelSpec {
  KernelKind kind = KernelKind::trig;
  std::vector<KernelAtom> atoms;
};

struct FieldSpec {
  int dim = 1;
  std::vector<KernelSpec> components;

  int n_components() const noexcept { return static_cast<int>(components.size()); }
  bool stationary() const noexcept;
};

/// Throws InvalidInput / DimensionMismatch for malformed specs.
void validate(const FieldSpec& spec);

/// Axis-aligned box [lower, upper).
struct Region {
  Vector lower;
  Vector upper;

  int dim() const noexcept { return static_cast<int>(lower.size()); }
  double volume() const;
  bool contains(std::span<const double> t) const noexcept;
};

void validate(const Region& region);

/// r(s, t) for one component.
double kernel_value(const KernelSpec& spec, const Vector& s, const Vector& t);

/// Covariance of grad[X / sqrt(Var X)] at t:
///   C = H / sigma^2 - g g^T / sigma^4,
/// sigma^2 = r(t,t), g = d_s r(s,t)|_{s=t}, H = d_s d_t r(s,t)|_{s=t}.
/// Throws DegenerateVariance (sigma^2 <= 1e-12) or DegenerateGradient.
SPDMatrix gradient_covariance(const KernelSpec& spec, const Vector& t);

/// Density of the (d-k)-measure of the zero set at t:
///   (d)_k / ((2 pi)^k kappa_{d-k}) * V_d(E_1(t), ..., E_k(t), B, ..., B).
MCEstimate zero_intensity(const FieldSpec& spec, const Vector& t, const McConfig& cfg);

struct ZeroMeasureEstimate {
  MCEstimate estimate;
  int quadrature_order = 0;
  /// |Q(2 order) - Q(order)|; 0 for stationary fields.
  double quadrature_delta = 0.0;
  /// estimate.std_error + quadrature_delta.
  double error_budget = 0.0;
};

/// E Vol_{d-k}(X^{-1}(0) in F). Stationary: intensity times Vol_d(F).
/// Otherwise (d = 1) Gauss-Legendre quadrature of the intensity; every node
/// shares the same random numbers and the reported standard error is the
/// weighted sum of node errors.
ZeroMeasureEstimate expected_zero_measure(const FieldSpec& spec, const Region& region,
                                          const McConfig& cfg, int quadrature_order = 32);

/// One sampled field. Immutable; coefficients already carry sqrt(w).
class Realization {
 public:
  /// coefficients[c] holds 2 values (a, b) per trig atom or 1 per polynomial atom.
  Realization(FieldSpec spec, std::vector<std::vector<double>> coefficients);

  const FieldSpec& spec() const noexcept { return spec_; }
  int dim() const noexcept { return spec_.dim; }
  int n_components() const noexcept { return spec_.n_components(); }
  const std::vector<double>& coefficients(int component) const {
    return coefficients_[static_cast<std::size_t>(component)];
  }

  double value(int component, std::span<const double> t) const;
  /// Writes the gradient into `out` (size d) and returns the value.
  double value_and_gradient(int component, std::span<const double> t, std::span<double> out) const;

  /// Values of a 2-D component on the node lattice
  /// (origin[0] + i step[0], origin[1] + j step[1]), i < nx, j < ny.
  Matrix lattice_values(int component, std::array<double, 2> origin, std::array<double, 2> step,
                        std::size_t nx, std::size_t ny) const;

 private:
  FieldSpec spec_;
  std::vector<std::vector<double>> coefficients_;
};

Realization simulate_realization(const FieldSpec& spec, RngStream stream);

}  // namespace mixvol
