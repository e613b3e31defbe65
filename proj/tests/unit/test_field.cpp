#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "field_support.hpp"
#include "mixvol/error.hpp"
#include "mixvol/field.hpp"
#include "mixvol/quadrature.hpp"
#include "test_support.hpp"

namespace mixvol {
namespace {

using testing::box;
using testing::field;
using testing::poly_kernel;
using testing::trig_kernel;

constexpr double kPi = std::numbers::pi;

McConfig config(std::size_t n, std::uint64_t seed) {
  McConfig cfg;
  cfg.samples = n;
  cfg.seed = seed;
  return cfg;
}

// d_s_i d_t_j of rho(s, t) = r(s,t) / sqrt(r(s,s) r(t,t)) at s = t, central differences.
Matrix finite_difference_covariance(const KernelSpec& k, const Vector& t, double h = 1e-4) {
  const auto d = t.size();
  auto rho = [&](const Vector& s, const Vector& u) {
    return kernel_value(k, s, u) / std::sqrt(kernel_value(k, s, s) * kernel_value(k, u, u));
  };
  Matrix c(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      Vector sp = t, sm = t, tp = t, tm = t;
      sp[i] += h;
      sm[i] -= h;
      tp[j] += h;
      tm[j] -= h;
      c(i, j) = (rho(sp, tp) - rho(sp, tm) - rho(sm, tp) + rho(sm, tm)) / (4 * h * h);
    }
  }
  return c;
}

double relative_matrix_error(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

KernelSpec random_trig(int d, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(d + 1, 6);
  std::uniform_real_distribution<double> w(0.2, 2.0);
  std::normal_distribution<double> n;
  std::vector<std::pair<double, std::vector<double>>> atoms;
  const int m = count(rng);
  for (int a = 0; a < m; ++a) {
    std::vector<double> omega(d);
    for (auto& x : omega) x = n(rng);
    atoms.push_back({w(rng), omega});
  }
  return trig_kernel(atoms);
}

KernelSpec random_poly(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.2, 2.0);
  std::vector<std::pair<double, int>> atoms;
  for (int j = 0; j <= 3; ++j) atoms.push_back({w(rng), j});
  return poly_kernel(atoms);
}

Vector point(std::initializer_list<double> v) {
  return Vector::Map(std::data(v), static_cast<Eigen::Index>(v.size()));
}

TEST(GradientCovariance, Examples) {
  const KernelSpec single = trig_kernel({{1.0, {1.0}}});
  EXPECT_NEAR(gradient_covariance(single, point({0.3})).entries()(0, 0), 1.0, 1e-14);

  const KernelSpec rice = testing::rice_field().components[0];
  EXPECT_NEAR(gradient_covariance(rice, point({0.0})).entries()(0, 0), 5.0, 1e-13);
  EXPECT_LE(relative_matrix_error(finite_difference_covariance(rice, point({0.0})), Matrix::Constant(1, 1, 5.0)),
            1e-6);

  const KernelSpec affine = poly_kernel({{1.0, 0}, {1.0, 1}});
  EXPECT_NEAR(gradient_covariance(affine, point({0.0})).entries()(0, 0), 1.0, 1e-14);
  EXPECT_LE(relative_matrix_error(finite_difference_covariance(affine, point({0.0})), Matrix::Identity(1, 1)), 1e-6);

  const Matrix circ = gradient_covariance(testing::circular_kernel(), point({1.0, 2.0})).entries();
  EXPECT_LE((circ - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(GradientCovariance, Degenerate) {
  auto code_of = [](const KernelSpec& k, const Vector& t) {
    try {
      gradient_covariance(k, t);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidInput;
  };
  EXPECT_EQ(code_of(poly_kernel({{1.0, 1}}), point({0.0})), ErrorCode::DegenerateVariance);
  EXPECT_EQ(code_of(poly_kernel({{1.0, 0}}), point({0.7})), ErrorCode::DegenerateGradient);
  EXPECT_EQ(code_of(trig_kernel({{1.0, {1.0, 0.0}}}), point({0.0, 0.0})), ErrorCode::DegenerateGradient);
  // Two parallel frequencies still leave one direction flat.
  EXPECT_EQ(code_of(trig_kernel({{1.0, {1.0, 1.0}}, {1.0, {2.0, 2.0}}}), point({0.0, 0.0})),
            ErrorCode::DegenerateGradient);
}

TEST(GradientCovariance, PolynomialAwayFromOrigin) {
  // Kac: rho'' at t equals the closed form (sum j^2 t^{2j-2} s - (sum j t^{2j-1})^2 / s) / s, s = sum t^{2j}.
  const KernelSpec kac = testing::kac_field().components[0];
  for (double t : {-2.0, -0.5, 0.0, 0.3, 1.0, 4.0}) {
    const double s = 1 + t * t + t * t * t * t;
    const double g = t + 2 * t * t * t;
    const double h = 1 + 4 * t * t;
    const double expected = h / s - g * g / (s * s);
    EXPECT_NEAR(gradient_covariance(kac, point({t})).entries()(0, 0), expected, 1e-13 * expected);
  }
}

TEST(KernelValue, MatchesAtomSums) {
  const KernelSpec k = trig_kernel({{2.0, {1.0, 0.5}}, {0.5, {-1.0, 2.0}}});
  const Vector s = point({0.3, -0.2});
  const Vector t = point({1.1, 0.4});
  const Vector diff = s - t;
  const double expected = 2.0 * std::cos(diff[0] + 0.5 * diff[1]) + 0.5 * std::cos(-diff[0] + 2 * diff[1]);
  EXPECT_NEAR(kernel_value(k, s, t), expected, 1e-15);
  EXPECT_NEAR(kernel_value(testing::kac_field().components[0], point({2.0}), point({3.0})), 1 + 6 + 36, 1e-12);
}

TEST(FieldValidation, RejectsMalformedSpecs) {
  EXPECT_THROW(validate(field(1, {})), Error);
  EXPECT_THROW(validate(field(1, {trig_kernel({}) })), Error);
  EXPECT_THROW(validate(field(1, {trig_kernel({{-1.0, {1.0}}})})), Error);
  EXPECT_THROW(validate(field(1, {trig_kernel({{1.0, {1.0, 2.0}}})})), Error);
  EXPECT_THROW(validate(field(2, {poly_kernel({{1.0, 1}})})), Error);
  EXPECT_THROW(validate(field(1, {poly_kernel({{1.0, -1}})})), Error);
  const KernelSpec k = testing::rice_field().components[0];
  EXPECT_THROW(validate(field(1, {k, k})), Error);
  EXPECT_NO_THROW(validate(testing::kac_field()));
  EXPECT_THROW(validate(box({1.0}, {0.0})), Error);
  EXPECT_THROW(validate(box({0.0, 0.0}, {1.0})), Error);
}

TEST(ZeroIntensity, Examples) {
  const MCEstimate rice = zero_intensity(testing::rice_field(), point({0.0}), config(1'000'000, 1));
  EXPECT_NEAR(rice.mean, std::sqrt(5.0) / kPi, 3 * rice.std_error);

  const FieldSpec points = field(2, {testing::circular_kernel(), testing::circular_kernel()});
  const MCEstimate p = zero_intensity(points, point({0.0, 0.0}), config(1'000'000, 2));
  EXPECT_NEAR(p.mean, 1 / (4 * kPi), 3 * p.std_error);

  const FieldSpec lines = field(2, {testing::circular_kernel()});
  const MCEstimate l = zero_intensity(lines, point({0.0, 0.0}), config(1'000'000, 3));
  EXPECT_NEAR(l.mean, 1 / (2 * std::sqrt(2.0)), 3 * l.std_error);
  EXPECT_NEAR(l.mean, 0.35355, 3 * l.std_error + 1e-5);
}

TEST(ExpectedZeroMeasure, SingleAtomHasTwoZerosPerPeriod) {
  const FieldSpec f = field(1, {trig_kernel({{1.0, {1.0}}})});
  const ZeroMeasureEstimate z = expected_zero_measure(f, box({0.0}, {2 * kPi}), config(1'000'000, 4));
  EXPECT_NEAR(z.estimate.mean, 2.0, 3 * z.estimate.std_error);
  EXPECT_EQ(z.quadrature_delta, 0.0);
}

TEST(ExpectedZeroMeasure, CircularSpectrumPointCount) {
  const FieldSpec f = field(2, {testing::circular_kernel(), testing::circular_kernel()});
  const ZeroMeasureEstimate z = expected_zero_measure(f, box({0.0, 0.0}, {10.0, 10.0}), config(1'000'000, 5));
  EXPECT_NEAR(z.estimate.mean, 100 / (4 * kPi), 3 * z.estimate.std_error);
  EXPECT_NEAR(100 / (4 * kPi), 7.9577, 1e-4);
}

// Mean number of real roots of a0 + a1 t + a2 t^2 in [lo, hi) over iid normal coefficients.
std::pair<double, double> quadratic_root_count(double lo, double hi, int draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double a0 = n(rng), a1 = n(rng), a2 = n(rng);
    const double disc = a1 * a1 - 4 * a2 * a0;
    int count = 0;
    if (disc > 0) {
      const double q = -0.5 * (a1 + std::copysign(std::sqrt(disc), a1));
      for (double root : {q / a2, a0 / q})
        if (root >= lo && root < hi) ++count;
    }
    sum += count;
    sum2 += count * count;
  }
  const double mean = sum / draws;
  return {mean, std::sqrt((sum2 / draws - mean * mean) / (draws - 1))};
}

TEST(ExpectedZeroMeasure, KacPolynomial) {
  const auto [mean, se] = quadratic_root_count(-5, 5, 100'000, 6);
  const ZeroMeasureEstimate z = expected_zero_measure(testing::kac_field(), box({-5.0}, {5.0}), config(1'000'000, 7));
  EXPECT_EQ(z.quadrature_order, 32);
  EXPECT_LT(z.quadrature_delta, 1e-3);
  EXPECT_DOUBLE_EQ(z.error_budget, z.estimate.std_error + z.quadrature_delta);
  EXPECT_NEAR(z.estimate.mean, mean, 3 * std::hypot(z.error_budget, se));
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  for (int q : {1, 2, 5, 16, 32, 64}) {
    const QuadratureRule rule = gauss_legendre(q);
    ASSERT_EQ(rule.nodes.size(), static_cast<std::size_t>(q));
    for (int p = 0; p <= 2 * q - 1; ++p) {
      double s = 0.0;
      for (int i = 0; i < q; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], p);
      const double exact = p % 2 == 1 ? 0.0 : 2.0 / (p + 1);
      EXPECT_NEAR(s, exact, 1e-13) << "q=" << q << " p=" << p;
    }
  }
  EXPECT_THROW(gauss_legendre(0), Error);
}

TEST(Simulation, Deterministic) {
  const FieldSpec f = field(2, {testing::circular_kernel(), testing::circular_kernel()});
  const Realization a = simulate_realization(f, RngStream{9, 3});
  const Realization b = simulate_realization(f, RngStream{9, 3});
  const Realization c = simulate_realization(f, RngStream{9, 4});
  for (int comp = 0; comp < 2; ++comp) {
    EXPECT_EQ(a.coefficients(comp), b.coefficients(comp));
    EXPECT_NE(a.coefficients(comp), c.coefficients(comp));
  }
}

TEST(Simulation, ValueAndGradientAgree) {
  std::mt19937_64 rng(8);
  const FieldSpec f = field(2, {random_trig(2, rng)});
  const Realization r = simulate_realization(f, RngStream{1, 0});
  const std::vector<double> t{0.4, -1.3};
  std::vector<double> g(2);
  const double v = r.value_and_gradient(0, t, g);
  EXPECT_NEAR(v, r.value(0, t), 1e-14);
  for (int i = 0; i < 2; ++i) {
    std::vector<double> tp = t, tm = t;
    tp[i] += 1e-6;
    tm[i] -= 1e-6;
    EXPECT_NEAR(g[i], (r.value(0, tp) - r.value(0, tm)) / 2e-6, 1e-7);
  }

  const Realization p = simulate_realization(testing::kac_field(), RngStream{1, 1});
  const auto& c = p.coefficients(0);
  std::vector<double> gp(1);
  const double t0 = 1.7;
  EXPECT_NEAR(p.value_and_gradient(0, std::vector<double>{t0}, gp), c[0] + c[1] * t0 + c[2] * t0 * t0, 1e-13);
  EXPECT_NEAR(gp[0], c[1] + 2 * c[2] * t0, 1e-13);
}

TEST(Simulation, LatticeMatchesPointEvaluation) {
  const FieldSpec f = field(2, {testing::circular_kernel(16)});
  const Realization r = simulate_realization(f, RngStream{2, 0});
  const Matrix lat = r.lattice_values(0, {0.5, -1.0}, {0.1, 0.2}, 7, 5);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 5; ++j)
      EXPECT_NEAR(lat(i, j), r.value(0, std::vector<double>{0.5 + 0.1 * i, -1.0 + 0.2 * j}), 1e-12);
}

class FieldProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(FieldProperties, AnalyticMatchesFiniteDifferences) {
  std::mt19937_64 rng(GetParam());
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 10; ++trial) {
    for (int d = 1; d <= 3; ++d) {
      const KernelSpec k = random_trig(d, rng);
      Vector t(d);
      for (int i = 0; i < d; ++i) t[i] = u(rng);
      EXPECT_LE(relative_matrix_error(finite_difference_covariance(k, t), gradient_covariance(k, t).entries()), 1e-6);
    }
    const KernelSpec p = random_poly(rng);
    const Vector t = point({u(rng)});
    EXPECT_LE(relative_matrix_error(finite_difference_covariance(p, t), gradient_covariance(p, t).entries()), 1e-6);
  }
}

TEST_P(FieldProperties, TrigKernelsAreStationary) {
  std::mt19937_64 rng(GetParam() + 10);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int d = 1; d <= 3; ++d) {
    const KernelSpec k = random_trig(d, rng);
    const Matrix base = gradient_covariance(k, Vector::Zero(d)).entries();
    for (int i = 0; i < 10; ++i) {
      Vector t(d);
      for (int j = 0; j < d; ++j) t[j] = u(rng);
      EXPECT_LE((gradient_covariance(k, t).entries() - base).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST_P(FieldProperties, EmpiricalMoments) {
  // Var X(0), Cov grad X(0), and Cov(X(0), grad X(0)) = 0 over 1e5 realizations.
  std::mt19937_64 rng(GetParam() + 20);
  const KernelSpec k = random_trig(2, rng);
  const FieldSpec f = field(2, {k});
  double lambda0 = 0.0;
  Matrix h = Matrix::Zero(2, 2);
  for (const auto& a : k.atoms) {
    lambda0 += a.weight;
    h += a.weight * a.frequency * a.frequency.transpose();
  }

  constexpr int n = 100'000;
  // Products: x^2, gx^2, gy^2, gx gy, x gx, x gy.
  std::array<double, 6> sum{}, sum2{};
  const std::vector<double> origin{0.0, 0.0};
  std::vector<double> g(2);
  for (int i = 0; i < n; ++i) {
    const Realization r = simulate_realization(f, RngStream{GetParam(), static_cast<std::uint64_t>(i)});
    const double x = r.value_and_gradient(0, origin, g);
    const std::array<double, 6> v{x * x, g[0] * g[0], g[1] * g[1], g[0] * g[1], x * g[0], x * g[1]};
    for (int j = 0; j < 6; ++j) {
      sum[j] += v[j];
      sum2[j] += v[j] * v[j];
    }
  }
  const std::array<double, 6> expected{lambda0, h(0, 0), h(1, 1), h(0, 1), 0.0, 0.0};
  for (int j = 0; j < 6; ++j) {
    const double mean = sum[j] / n;
    const double se = std::sqrt((sum2[j] / n - mean * mean) / (n - 1));
    EXPECT_NEAR(mean, expected[j], 3 * se) << "moment " << j;
  }
}

TEST_P(FieldProperties, WeightScalingLeavesIntensityUnchanged) {
  std::mt19937_64 rng(GetParam() + 30);
  std::uniform_real_distribution<double> cdist(0.01, 100.0);
  const KernelSpec k = random_trig(2, rng);
  KernelSpec scaled = k;
  const double c = cdist(rng);
  for (auto& a : scaled.atoms) a.weight *= c;

  const MCEstimate a = zero_intensity(field(2, {k}), Vector::Zero(2), config(200'000, GetParam()));
  const MCEstimate b = zero_intensity(field(2, {scaled}), Vector::Zero(2), config(200'000, GetParam() + 1));
  EXPECT_NEAR(a.mean, b.mean, 3 * std::hypot(a.std_error, b.std_error));

  // Same stream: the scaled field is sqrt(c) times the original, realization by realization.
  const Realization ra = simulate_realization(field(2, {k}), RngStream{GetParam(), 0});
  const Realization rb = simulate_realization(field(2, {scaled}), RngStream{GetParam(), 0});
  for (double t : {0.0, 0.7, -3.0}) {
    const std::vector<double> pt{t, 1.0 - t};
    EXPECT_NEAR(rb.value(0, pt), std::sqrt(c) * ra.value(0, pt), 1e-12 * std::sqrt(c) * (1 + std::abs(ra.value(0, pt))));
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, FieldProperties, ::testing::Values(1, 2, 3, 4, 5));

}  // namespace
}  // namespace mixvol
