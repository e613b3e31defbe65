#include "mixvol/field.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "mixvol/error.hpp"
#include "mixvol/mixed_volume.hpp"
#include "mixvol/quadrature.hpp"

namespace mixvol {

namespace {

struct KernelMoments {
  double variance = 0.0;
  Vector g;
  Matrix H;
};

KernelMoments moments(const KernelSpec& spec, const Vector& t) {
  const auto d = t.size();
  KernelMoments m{0.0, Vector::Zero(d), Matrix::Zero(d, d)};
  if (spec.kind == KernelKind::trig) {
    for (const auto& atom : spec.atoms) {
      m.variance += atom.weight;
      m.H += atom.weight * atom.frequency * atom.frequency.transpose();
    }
    return m;
  }
  const double x = t[0];
  for (const auto& atom : spec.atoms) {
    const int j = atom.degree;
    m.variance += atom.weight * std::pow(x, 2 * j);
    if (j >= 1) {
      m.g[0] += atom.weight * j * std::pow(x, 2 * j - 1);
      m.H(0, 0) += atom.weight * j * j * std::pow(x, 2 * j - 2);
    }
  }
  return m;
}

}  // namespace

bool FieldSpec::stationary() const noexcept {
  for (const auto& c : components) {
    if (c.kind != KernelKind::trig) return false;
  }
  return true;
}

void validate(const FieldSpec& spec) {
  if (spec.dim < 1 || spec.dim > kMaxDim) {
    throw Error(ErrorCode::DimensionMismatch, "field dimension must lie in [1, 16]");
  }
  if (spec.components.empty() || spec.n_components() > spec.dim) {
    throw Error(ErrorCode::DimensionMismatch, "field needs 1 <= k <= d components");
  }
  for (const auto& c : spec.components) {
    if (c.atoms.empty()) {
      throw Error(ErrorCode::InvalidInput, "every component needs at least one atom");
    }
    if (c.kind == KernelKind::polynomial && spec.dim != 1) {
      throw Error(ErrorCode::DimensionMismatch, "polynomial kernels are one-dimensional");
    }
    for (const auto& a : c.atoms) {
      if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
        throw Error(ErrorCode::InvalidInput, "atom weights must be positive");
      }
      if (c.kind == KernelKind::trig) {
        if (a.frequency.size() != spec.dim || !a.frequency.allFinite()) {
          throw Error(ErrorCode::DimensionMismatch, "trig atom frequency must have size d");
        }
      } else if (a.degree < 0 || a.degree > 64) {
        throw Error(ErrorCode::InvalidInput, "polynomial degree must lie in [0, 64]");
      }
    }
  }
}

double Region::volume() const {
  double v = 1.0;
  for (Eigen::Index i = 0; i < lower.size(); ++i) v *= upper[i] - lower[i];
  return v;
}

bool Region::contains(std::span<const double> t) const noexcept {
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    const double x = t[static_cast<std::size_t>(i)];
    if (!(x >= lower[i] && x < upper[i])) return false;
  }
  return true;
}

void validate(const Region& region) {
  if (region.lower.size() == 0 || region.lower.size() != region.upper.size()) {
    throw Error(ErrorCode::DimensionMismatch, "region bounds must be non-empty and equal-sized");
  }
  for (Eigen::Index i = 0; i < region.lower.size(); ++i) {
    if (!(region.lower[i] < region.upper[i]) || !std::isfinite(region.upper[i] - region.lower[i])) {
      throw Error(ErrorCode::InvalidInput, "region needs lower < upper in every coordinate");
    }
  }
}

double kernel_value(const KernelSpec& spec, const Vector& s, const Vector& t) {
  double r = 0.0;
  for (const auto& atom : spec.atoms) {
    if (spec.kind == KernelKind::trig) {
      r += atom.weight * std::cos(atom.frequency.dot(s - t));
    } else {
      r += atom.weight * std::pow(s[0] * t[0], atom.degree);
    }
  }
  return r;
}

SPDMatrix gradient_covariance(const KernelSpec& spec, const Vector& t) {
  const KernelMoments m = moments(spec, t);
  if (!(m.variance > 1e-12)) {
    throw Error(ErrorCode::DegenerateVariance, "field variance vanishes at the evaluation point");
  }
  const Matrix h = m.H / m.variance;
  const Matrix c = h - (m.g * m.g.transpose()) / (m.variance * m.variance);
  // Rank test relative to the terms C is formed from; round-off alone can
  // leave a positive Cholesky pivot on an exactly singular C.
  const double scale = h.cwiseAbs().maxCoeff();
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (c + c.transpose()), Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 1e-10 * scale)) {
    throw Error(ErrorCode::DegenerateGradient,
                "gradient covariance of the normalized field is rank deficient");
  }
  try {
    return make_spd(c);
  } catch (const Error& e) {
    throw Error(ErrorCode::DegenerateGradient,
                "normalized gradient covariance is not full rank (" + std::string(e.what()) + ")");
  }
}

MCEstimate zero_intensity(const FieldSpec& spec, const Vector& t, const McConfig& cfg) {
  validate(spec);
  if (t.size() != spec.dim) {
    throw Error(ErrorCode::DimensionMismatch, "evaluation point has the wrong dimension");
  }
  const int d = spec.dim;
  const int k = spec.n_components();
  std::vector<Ellipsoid> ellipsoids;
  ellipsoids.reserve(static_cast<std::size_t>(k));
  for (const auto& c : spec.components) ellipsoids.emplace_back(gradient_covariance(c, t));

  const double factor = static_cast<double>(falling_factorial(d, k)) /
                        (std::pow(2.0 * std::numbers::pi, k) * unit_ball_volume(d - k));
  return mixed_volume_with_balls(ellipsoids, cfg).scaled(factor);
}

namespace {

struct QuadratureResult {
  double mean = 0.0;
  double std_error = 0.0;
};

QuadratureResult integrate_intensity(const FieldSpec& spec, const Region& region,
                                     const McConfig& cfg, int order) {
  const QuadratureRule rule = gauss_legendre(order);
  const double half = 0.5 * (region.upper[0] - region.lower[0]);
  const double mid = 0.5 * (region.upper[0] + region.lower[0]);
  QuadratureResult out;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    Vector t(1);
    t[0] = mid + half * rule.nodes[i];
    const MCEstimate node = zero_intensity(spec, t, cfg);
    out.mean += half * rule.weights[i] * node.mean;
    out.std_error += half * rule.weights[i] * node.std_error;
  }
  return out;
}

}  // namespace

ZeroMeasureEstimate expected_zero_measure(const FieldSpec& spec, const Region& region,
                                          const McConfig& cfg, int quadrature_order) {
  validate(spec);
  validate(region);
  if (region.dim() != spec.dim) {
    throw Error(ErrorCode::DimensionMismatch, "region and field dimensions differ");
  }
  ZeroMeasureEstimate out;
  if (spec.stationary()) {
    const Vector center = 0.5 * (region.lower + region.upper);
    out.estimate = zero_intensity(spec, center, cfg).scaled(region.volume());
    out.error_budget = out.estimate.std_error;
    return out;
  }
  if (spec.dim != 1) {
    throw Error(ErrorCode::DimensionMismatch, "non-stationary quadrature is one-dimensional");
  }
  const QuadratureResult coarse = integrate_intensity(spec, region, cfg, quadrature_order);
  const QuadratureResult fine = integrate_intensity(spec, region, cfg, 2 * quadrature_order);

  MCEstimate est;
  est.mean = coarse.mean;
  est.std_error = coarse.std_error;
  est.n_samples = cfg.samples;
  est.seed = cfg.seed;
  est.ci_level = cfg.ci_level;
  est.ci_half_width = normal_quantile_two_sided(cfg.ci_level) * est.std_error;
  out.estimate = est;
  out.quadrature_order = quadrature_order;
  out.quadrature_delta = std::abs(fine.mean - coarse.mean);
  out.error_budget = est.std_error + out.quadrature_delta;
  return out;
}

Realization::Realization(FieldSpec spec, std::vector<std::vector<double>> coefficients)
    : spec_(std::move(spec)), coefficients_(std::move(coefficients)) {
  validate(spec_);
  if (coefficients_.size() != spec_.components.size()) {
    throw Error(ErrorCode::DimensionMismatch, "one coefficient list per component is required");
  }
  for (std::size_t c = 0; c < coefficients_.size(); ++c) {
    const auto& comp = spec_.components[c];
    const std::size_t per = comp.kind == KernelKind::trig ? 2 : 1;
    if (coefficients_[c].size() != per * comp.atoms.size()) {
      throw Error(ErrorCode::DimensionMismatch, "coefficient count does not match the atoms");
    }
  }
}

double Realization::value(int component, std::span<const double> t) const {
  const auto& comp = spec_.components[static_cast<std::size_t>(component)];
  const auto& coef = coefficients(component);
  double x = 0.0;
  if (comp.kind == KernelKind::trig) {
    for (std::size_t a = 0; a < comp.atoms.size(); ++a) {
      const Vector& w = comp.atoms[a].frequency;
      double phase = 0.0;
      for (Eigen::Index i = 0; i < w.size(); ++i) phase += w[i] * t[static_cast<std::size_t>(i)];
      x += coef[2 * a] * std::cos(phase) + coef[2 * a + 1] * std::sin(phase);
    }
  } else {
    for (std::size_t a = 0; a < comp.atoms.size(); ++a) {
      x += coef[a] * std::pow(t[0], comp.atoms[a].degree);
    }
  }
  return x;
}

double Realization::value_and_gradient(int component, std::span<const double> t,
                                       std::span<double> out) const {
  const auto& comp = spec_.components[static_cast<std::size_t>(component)];
  const auto& coef = coefficients(component);
  for (double& g : out) g = 0.0;
  double x = 0.0;
  if (comp.kind == KernelKind::trig) {
    for (std::size_t a = 0; a < comp.atoms.size(); ++a) {
      const Vector& w = comp.atoms[a].frequency;
      double phase = 0.0;
      for (Eigen::Index i = 0; i < w.size(); ++i) phase += w[i] * t[static_cast<std::size_t>(i)];
      const double c = std::cos(phase);
      const double s = std::sin(phase);
      x += coef[2 * a] * c + coef[2 * a + 1] * s;
      const double slope = coef[2 * a + 1] * c - coef[2 * a] * s;
      for (Eigen::Index i = 0; i < w.size(); ++i) out[static_cast<std::size_t>(i)] += slope * w[i];
    }
  } else {
    for (std::size_t a = 0; a < comp.atoms.size(); ++a) {
      const int j = comp.atoms[a].degree;
      x += coef[a] * std::pow(t[0], j);
      if (j >= 1) out[0] += coef[a] * j * std::pow(t[0], j - 1);
    }
  }
  return x;
}

Matrix Realization::lattice_values(int component, std::array<double, 2> origin,
                                   std::array<double, 2> step, std::size_t nx,
                                   std::size_t ny) const {
  const auto& comp = spec_.components[static_cast<std::size_t>(component)];
  if (spec_.dim != 2 || comp.kind != KernelKind::trig) {
    throw Error(ErrorCode::DimensionMismatch, "lattice evaluation needs a 2-D trig component");
  }
  const auto& coef = coefficients(component);
  const auto atoms = static_cast<Eigen::Index>(comp.atoms.size());
  const auto rows = static_cast<Eigen::Index>(nx);
  const auto cols = static_cast<Eigen::Index>(ny);

  // X(x_i, y_j) = sum_a cos(w0 x_i) U_a(y_j) + sin(w0 x_i) W_a(y_j)
  Matrix left(rows, 2 * atoms);
  Matrix right(2 * atoms, cols);
  for (Eigen::Index a = 0; a < atoms; ++a) {
    const Vector& w = comp.atoms[static_cast<std::size_t>(a)].frequency;
    const double ca = coef[static_cast<std::size_t>(2 * a)];
    const double sb = coef[static_cast<std::size_t>(2 * a + 1)];
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double phase = w[0] * (origin[0] + static_cast<double>(i) * step[0]);
      left(i, 2 * a) = std::cos(phase);
      left(i, 2 * a + 1) = std::sin(phase);
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double phase = w[1] * (origin[1] + static_cast<double>(j) * step[1]);
      const double c = std::cos(phase);
      const double s = std::sin(phase);
      right(2 * a, j) = ca * c + sb * s;
      right(2 * a + 1, j) = sb * c - ca * s;
    }
  }
  return left * right;
}

Realization simulate_realization(const FieldSpec& spec, RngStream stream) {
  validate(spec);
  NormalGenerator gen(stream);
  std::vector<std::vector<double>> coefficients;
  coefficients.reserve(spec.components.size());
  for (const auto& comp : spec.components) {
    std::vector<double> c;
    for (const auto& atom : comp.atoms) {
      const double scale = std::sqrt(atom.weight);
      c.push_back(scale * gen());
      if (comp.kind == KernelKind::trig) c.push_back(scale * gen());
    }
    coefficients.push_back(std::move(c));
  }
  return Realization(spec, std::move(coefficients));
}

}  // namespace mixvol
