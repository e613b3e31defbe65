#include "mixvol/oracle2d.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "mixvol/error.hpp"

namespace mixvol {

namespace {

void require_planar(const Ellipsoid& e) {
  if (e.dim() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "planar oracle needs 2-D ellipsoids");
  }
}

}  // namespace

SupportBody2D support_body(const Ellipsoid& e) {
  require_planar(e);
  const Matrix& s = e.sigma().entries();
  const double a = s(0, 0);
  const double b = s(0, 1);
  const double c = s(1, 1);
  auto h = [a, b, c](double t) {
    const double x = std::cos(t);
    const double y = std::sin(t);
    return std::sqrt(a * x * x + 2.0 * b * x * y + c * y * y);
  };
  auto hp = [a, b, c, h](double t) {
    const double x = std::cos(t);
    const double y = std::sin(t);
    // u' = (-y, x); u'^T Sigma u
    const double num = (c - a) * x * y + b * (x * x - y * y);
    return num / h(t);
  };
  return {h, hp};
}

SupportBody2D minkowski_combination(const SupportBody2D& K, double a, const SupportBody2D& L,
                                    double b) {
  return {[=](double t) { return a * K.h(t) + b * L.h(t); },
          [=](double t) { return a * K.h_prime(t) + b * L.h_prime(t); }};
}

double area_from_support(const SupportBody2D& body, int n_nodes) {
  if (n_nodes < 64 || n_nodes % 2 != 0) {
    throw Error(ErrorCode::OutOfRange, "n_nodes must be even and at least 64");
  }
  const double step = 2.0 * std::numbers::pi / n_nodes;
  std::vector<double> h(static_cast<std::size_t>(n_nodes));
  double sum = 0.0;
  for (int i = 0; i < n_nodes; ++i) {
    const double t = i * step;
    const double hv = body.h(t);
    const double hp = body.h_prime(t);
    h[static_cast<std::size_t>(i)] = hv;
    sum += hv * hv - hp * hp;
  }
  for (int i = 0; i < n_nodes; ++i) {
    const double prev = h[static_cast<std::size_t>((i + n_nodes - 1) % n_nodes)];
    const double next = h[static_cast<std::size_t>((i + 1) % n_nodes)];
    const double cur = h[static_cast<std::size_t>(i)];
    const double radius = cur + (next - 2.0 * cur + prev) / (step * step);
    if (radius < -1e-8) {
      throw Error(ErrorCode::NonConvexBody,
                  "h + h'' is negative at theta=" + std::to_string(i * step));
    }
  }
  return 0.5 * sum * step;
}

double mixed_area_oracle(const Ellipsoid& e1, const Ellipsoid& e2, int n_nodes) {
  const SupportBody2D k = support_body(e1);
  const SupportBody2D l = support_body(e2);
  const double sum = area_from_support(minkowski_combination(k, 1.0, l, 1.0), n_nodes);
  return 0.5 * (sum - area_from_support(k, n_nodes) - area_from_support(l, n_nodes));
}

MinkowskiFit minkowski_poly_check(const Ellipsoid& e1, const Ellipsoid& e2,
                                  std::span<const std::array<double, 2>> lambda_grid,
                                  int n_nodes) {
  const auto m = static_cast<Eigen::Index>(lambda_grid.size());
  if (m < 6) {
    throw Error(ErrorCode::IllConditionedFit, "need at least 6 grid points");
  }
  const SupportBody2D k = support_body(e1);
  const SupportBody2D l = support_body(e2);
  Matrix design(m, 3);
  Vector area(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto [l1, l2] = lambda_grid[static_cast<std::size_t>(i)];
    if (l1 < 0.0 || l2 < 0.0) {
      throw Error(ErrorCode::OutOfRange, "Minkowski weights must be non-negative");
    }
    design(i, 0) = l1 * l1;
    design(i, 1) = l1 * l2;
    design(i, 2) = l2 * l2;
    area[i] = area_from_support(minkowski_combination(k, l1, l, l2), n_nodes);
  }
  Eigen::JacobiSVD<Matrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv.minCoeff() > 1e-10 * sv.maxCoeff())) {
    throw Error(ErrorCode::IllConditionedFit, "lambda grid does not determine the coefficients");
  }
  const Vector coef = svd.solve(area);
  MinkowskiFit fit{coef[0], coef[1], coef[2], 0.0};
  const double scale = std::max(area.cwiseAbs().maxCoeff(), 1e-300);
  fit.residual = (design * coef - area).cwiseAbs().maxCoeff() / scale;
  return fit;
}

}  // namespace mixvol
