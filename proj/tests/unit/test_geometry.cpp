#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "mixvol/error.hpp"
#include "mixvol/geometry.hpp"
#include "test_support.hpp"

namespace mixvol {
namespace {

constexpr double kPi = std::numbers::pi;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidInput;
}

Matrix diag(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v.asDiagonal();
}

// Randomized invariants, each run under seeds 1..5.
class GeometryProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST(MakeSpd, IdentityFactorIsIdentity) {
  const SPDMatrix s = make_spd(Matrix::Identity(3, 3));
  EXPECT_EQ(s.dim(), 3);
  EXPECT_TRUE(s.factor().isApprox(Matrix::Identity(3, 3)));
}

TEST(MakeSpd, DiagonalFactorHoldsSquareRoots) {
  const SPDMatrix s = make_spd(diag({4, 1}));
  EXPECT_DOUBLE_EQ(s.factor()(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(s.factor()(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(s.factor()(1, 0), 0.0);
}

TEST(MakeSpd, IndefiniteIsRejected) {
  Matrix m(2, 2);
  m << 1, 2, 2, 1;
  EXPECT_EQ(code_of([&] { make_spd(m); }), ErrorCode::NotPositiveDefinite);
}

TEST(MakeSpd, AsymmetricIsRejected) {
  Matrix m(2, 2);
  m << 2, 0.5, 0.4, 2;
  EXPECT_EQ(code_of([&] { make_spd(m); }), ErrorCode::NotSymmetric);
  // Within the relative tolerance.
  m << 2, 0.5, 0.5 + 1e-14, 2;
  EXPECT_NO_THROW(make_spd(m));
}

TEST(MakeSpd, ShapeErrors) {
  EXPECT_EQ(code_of([] { make_spd(Matrix(2, 3)); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { make_spd(Matrix::Identity(17, 17)); }), ErrorCode::DimensionMismatch);
  EXPECT_NO_THROW(make_spd(Matrix::Identity(16, 16)));
}

TEST(MakeSpd, SemidefiniteIsRejected) {
  Matrix m(2, 2);
  m << 1, 1, 1, 1;
  EXPECT_EQ(code_of([&] { make_spd(m); }), ErrorCode::NotPositiveDefinite);
}

TEST(MakeSpd, FactorReproducesRandomInputs) {
  std::mt19937_64 rng(11);
  for (int d = 1; d <= 8; ++d) {
    const Matrix m = testing::random_spd(d, rng);
    const SPDMatrix s = make_spd(m);
    EXPECT_LE((s.factor() * s.factor().transpose() - m).cwiseAbs().maxCoeff(),
              1e-10 * m.cwiseAbs().maxCoeff());
  }
}

TEST(UnitBallVolume, KnownValues) {
  EXPECT_DOUBLE_EQ(unit_ball_volume(0), 1.0);
  EXPECT_DOUBLE_EQ(unit_ball_volume(1), 2.0);
  EXPECT_NEAR(unit_ball_volume(2), 3.141592653589793, 1e-15);
  EXPECT_NEAR(unit_ball_volume(3), 4.188790204786391, 1e-15);
  EXPECT_EQ(code_of([] { unit_ball_volume(-1); }), ErrorCode::OutOfRange);
}

TEST(UnitBallVolume, Recursion) {
  for (int n = 2; n <= 40; ++n) {
    const double expected = unit_ball_volume(n - 2) * 2.0 * kPi / n;
    EXPECT_NEAR(unit_ball_volume(n) / expected, 1.0, 1e-14) << "n=" << n;
  }
}

TEST(FallingFactorial, Values) {
  EXPECT_EQ(falling_factorial(5, 2), 20);
  EXPECT_EQ(falling_factorial(3, 3), 6);
  EXPECT_EQ(falling_factorial(7, 0), 1);
  EXPECT_EQ(falling_factorial(16, 16), 20922789888000);
  EXPECT_EQ(code_of([] { falling_factorial(3, 4); }), ErrorCode::OutOfRange);
  EXPECT_EQ(code_of([] { falling_factorial(3, -1); }), ErrorCode::OutOfRange);
}

TEST(TransformEllipsoid, Examples) {
  const Ellipsoid ball = Ellipsoid::ball(2);
  EXPECT_TRUE(transform_ellipsoid(ball, 2.0 * Matrix::Identity(2, 2)).sigma().entries().isApprox(4.0 * Matrix::Identity(2, 2)));

  Matrix rot(2, 2);
  rot << 0, -1, 1, 0;
  const Matrix swapped = transform_ellipsoid(Ellipsoid::from_matrix(diag({1, 4})), rot).sigma().entries();
  EXPECT_NEAR((swapped - diag({4, 1})).cwiseAbs().maxCoeff(), 0.0, 1e-15);

  EXPECT_TRUE(transform_ellipsoid(ball, Matrix::Identity(2, 2)).sigma().entries().isApprox(Matrix::Identity(2, 2)));
}

TEST(TransformEllipsoid, SingularTransformIsRejected) {
  Matrix L(2, 2);
  L << 1, 2, 2, 4;
  EXPECT_EQ(code_of([&] { transform_ellipsoid(Ellipsoid::ball(2), L); }), ErrorCode::SingularTransform);
}

TEST_P(GeometryProperties, TransformsCompose) {
  std::mt19937_64 rng(GetParam() * 100 + 3);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 4;
    const Ellipsoid e = Ellipsoid::from_matrix(testing::random_spd(d, rng));
    const Matrix L = testing::random_matrix(d, d, rng) + 2.0 * Matrix::Identity(d, d);
    const Matrix M = testing::random_matrix(d, d, rng) + 2.0 * Matrix::Identity(d, d);
    const Matrix twice = transform_ellipsoid(transform_ellipsoid(e, L), M).sigma().entries();
    const Matrix once = transform_ellipsoid(e, M * L).sigma().entries();
    EXPECT_LE((twice - once).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, once.cwiseAbs().maxCoeff()));
  }
}

TEST(ProjectEllipsoid, Examples) {
  Matrix first_two = Matrix::Zero(2, 3);
  first_two(0, 0) = 1;
  first_two(1, 1) = 1;
  EXPECT_TRUE(project_ellipsoid(Ellipsoid::ball(3), first_two).sigma().entries().isApprox(Matrix::Identity(2, 2)));

  Matrix e13 = Matrix::Zero(2, 3);
  e13(0, 0) = 1;
  e13(1, 2) = 1;
  EXPECT_TRUE(project_ellipsoid(Ellipsoid::from_matrix(diag({1, 4, 9})), e13).sigma().entries().isApprox(diag({1, 9})));

  std::mt19937_64 rng(5);
  const Ellipsoid e = Ellipsoid::from_matrix(testing::random_spd(4, rng));
  const Ellipsoid rotated = project_ellipsoid(e, testing::random_orthogonal(4, rng));
  EXPECT_NEAR(rotated.sigma().determinant() / e.sigma().determinant(), 1.0, 1e-10);
}

TEST(ProjectEllipsoid, NonOrthonormalBasisIsRejected) {
  Matrix basis(1, 2);
  basis << 1.0, 0.1;
  EXPECT_EQ(code_of([&] { project_ellipsoid(Ellipsoid::ball(2), basis); }), ErrorCode::NonOrthonormalBasis);
}

TEST_P(GeometryProperties, NestedProjectionsCompose) {
  std::mt19937_64 rng(GetParam() * 100 + 9);
  for (int trial = 0; trial < 10; ++trial) {
    const Ellipsoid e = Ellipsoid::from_matrix(testing::random_spd(5, rng));
    const Matrix q = testing::random_orthogonal(5, rng);
    const Matrix outer = q.topRows(3);                            // 3 x 5
    const Matrix inner = testing::random_orthogonal(3, rng).topRows(2);  // 2 x 3, in outer's basis
    const Matrix twice = project_ellipsoid(project_ellipsoid(e, outer), inner).sigma().entries();
    const Matrix once = project_ellipsoid(e, inner * outer).sigma().entries();
    EXPECT_LE((twice - once).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(SupportFunction, Examples) {
  Vector u(2);
  u << 0.6, 0.8;
  EXPECT_NEAR(support_function(Ellipsoid::ball(2), u), 1.0, 1e-15);
  const Ellipsoid e = Ellipsoid::from_matrix(diag({4, 1}));
  EXPECT_NEAR(support_function(e, Vector::Unit(2, 0)), 2.0, 1e-15);
  u << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  EXPECT_NEAR(support_function(e, u), std::sqrt(2.5), 1e-15);
}

TEST(SupportFunction, NonUnitDirectionIsRejected) {
  Vector u(2);
  u << 1.0, 1.0;
  EXPECT_EQ(code_of([&] { support_function(Ellipsoid::ball(2), u); }), ErrorCode::NotUnitVector);
}

TEST_P(GeometryProperties, SupportFunctionCovariantUnderTransforms) {
  std::mt19937_64 rng(GetParam() * 100 + 21);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    const Ellipsoid e = Ellipsoid::from_matrix(testing::random_spd(d, rng));
    const Matrix L = testing::random_matrix(d, d, rng) + 2.0 * Matrix::Identity(d, d);
    Vector u = testing::random_matrix(d, 1, rng);
    u.normalize();
    const Vector lu = L.transpose() * u;
    const double lhs = support_function(transform_ellipsoid(e, L), u);
    const double rhs = support_function(e, lu / lu.norm()) * lu.norm();
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, rhs));
  }
}

TEST(Ellipsoid, VolumeMatchesSemiAxes) {
  EXPECT_NEAR(Ellipsoid::from_matrix(diag({4, 1})).volume(), 2 * kPi, 1e-14);
  EXPECT_NEAR(Ellipsoid::ball(3, 2.0).volume(), 8 * 4 * kPi / 3, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Seeds, GeometryProperties, ::testing::Values(1, 2, 3, 4, 5));

}  // namespace
}  // namespace mixvol
