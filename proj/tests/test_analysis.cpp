#include "pgdot/analysis.hpp"
#include "pgdot/benchmarks.hpp"

#include <gtest/gtest.h>

namespace pgdot {
namespace {

Objective square_1d() {
  Objective o;
  o.name = "square";
  o.dim = 1;
  o.value = [](const Vector& x) { return x[0] * x[0]; };
  o.gradient = [](const Vector& x) { return Vector::Constant(1, 2 * x[0]); };
  return o;
}

Objective quadratic_form(const Matrix& a) {
  Objective o;
  o.name = "quadratic_form";
  o.dim = static_cast<int>(a.rows());
  o.value = [a](const Vector& x) { return 0.5 * x.dot(a * x); };
  o.gradient = [a](const Vector& x) { return Vector(a * x); };
  return o;
}

TEST(FdGradient, ExactOnQuadratics) {
  for (double h : {1e-6, 1e-3, 0.25}) {
    EXPECT_NEAR(fd_gradient(square_1d(), Vector::Ones(1), h)[0], 2.0, 1e-9) << h;
  }
  Vector x(2);
  x << 3, 4;
  EXPECT_LT((fd_gradient(half_squared_norm(2), x) - x).norm(), 1e-8);
}

TEST(FdGradient, StaircaseAwayFromBranchPoints) {
  const Objective f = make_staircase({4, 1.0, 4});
  RngStream rng = derive_stream(10, 0);
  for (int k = 0; k < 20; ++k) {
    const Vector x = rng.normal_vector(4);
    EXPECT_LT(relative_error(f.gradient(x), fd_gradient(f, x)), 1e-5);
  }
}

TEST(FdGradient, RejectsNonPositiveStep) {
  EXPECT_THROW(fd_gradient(square_1d(), Vector::Ones(1), 0.0), ContractViolation);
}

TEST(MinHessianEig, Examples) {
  EXPECT_NEAR(min_hessian_eig(quadratic_saddle(), Vector::Zero(2)), -1.0, 1e-6);
  EXPECT_NEAR(min_hessian_eig(half_squared_norm(3), Vector::Constant(3, 0.7)), 1.0, 1e-6);
  EXPECT_NEAR(min_hessian_eig(make_reglq({}), Vector::Zero(2)), -0.1, 1e-4);
}

TEST(MinHessianEig, RandomQuadraticsMatchTrueSpectrum) {
  RngStream rng = derive_stream(21, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 9;
    Matrix b(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) b(i, j) = rng.normal();
    const Matrix a = 0.5 * (b + b.transpose());
    const double truth = Eigen::SelfAdjointEigenSolver<Matrix>(a).eigenvalues()[0];
    EXPECT_NEAR(min_hessian_eig(quadratic_form(a), rng.normal_vector(d)), truth, 1e-6);
  }
}

TEST(SymmetricEigenvalues, SortedAscending) {
  Matrix a(3, 3);
  a << 2, 1, 0, 1, 2, 1, 0, 1, 2;
  const Vector e = symmetric_eigenvalues(a);
  EXPECT_NEAR(e[0], 2 - std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(e[1], 2.0, 1e-12);
  EXPECT_NEAR(e[2], 2 + std::sqrt(2.0), 1e-12);
}

TEST(MinHessianEig, DimensionCap) {
  EXPECT_THROW(min_hessian_eig(half_squared_norm(65), Vector::Zero(65)), ContractViolation);
}

TEST(ClassifyPoint, StrictSaddleIsFirstOrderOnly) {
  const StationarityReport r = classify_point(quadratic_saddle(), Vector::Zero(2), 0.1, 1.0);
  EXPECT_EQ(r.grad_norm, 0.0);
  EXPECT_NEAR(r.curvature_threshold, -std::sqrt(0.1), 1e-15);
  EXPECT_EQ(r.label, StationarityLabel::eps_first_order);
}

TEST(ClassifyPoint, MinimumIsSecondOrder) {
  for (double eps : {1e-3, 0.1, 2.0}) {
    EXPECT_EQ(classify_point(half_squared_norm(2), Vector::Zero(2), eps, 1.0).label,
              StationarityLabel::eps_second_order);
  }
}

TEST(ClassifyPoint, LargeGradientIsNeither) {
  EXPECT_EQ(classify_point(half_squared_norm(2), Vector::Ones(2), 0.1, 1.0).label, StationarityLabel::neither);
}

TEST(ClassifyPoint, StaircaseRingHasFlatRadialCurvature) {
  // f̃′ and f̃″ both vanish at r = 1, so the Hessian is zero there: the
  // ring is degenerate rather than a strict saddle.
  const StationarityReport r = classify_point(make_staircase({4, 1.0, 4}), Vector::Ones(4), 1e-2, 1.0);
  EXPECT_EQ(r.grad_norm, 0.0);
  EXPECT_NEAR(r.lambda_min, 0.0, 1e-6);
  EXPECT_EQ(r.label, StationarityLabel::eps_second_order);
}

TEST(ClassifyPoint, StaircaseSlopeNearRingIsNotStationary) {
  Vector x = Vector::Constant(4, std::sqrt(1.3));
  EXPECT_EQ(classify_point(make_staircase({4, 1.0, 4}), x, 1e-2, 1.0).label, StationarityLabel::neither);
}

TEST(ClassifyPoint, LabelDependsOnlyOnThresholds) {
  // (ε, ρ) and (ε, ρ') with equal √(ρε) classify alike; the label agrees
  // with the two defining inequalities.
  RngStream rng = derive_stream(3, 0);
  const Objective f = quadratic_saddle();
  for (int k = 0; k < 30; ++k) {
    const Vector x = 0.2 * rng.normal_vector(2);
    const double eps = 0.05 + rng.uniform(), rho = 0.1 + rng.uniform();
    const auto a = classify_point(f, x, eps, rho);
    const double rho2 = a.curvature_threshold * a.curvature_threshold / eps;
    const auto b = classify_point(f, x, eps, rho2);
    EXPECT_EQ(a.label, b.label);
    const bool first = a.grad_norm <= eps;
    const bool second = first && a.lambda_min >= a.curvature_threshold;
    EXPECT_EQ(a.label, second  ? StationarityLabel::eps_second_order
                       : first ? StationarityLabel::eps_first_order
                               : StationarityLabel::neither);
  }
}

TEST(ClassifyPoint, RejectsNonPositiveTolerances) {
  EXPECT_THROW(classify_point(half_squared_norm(1), Vector::Zero(1), 0.0, 1.0), ContractViolation);
  EXPECT_THROW(classify_point(half_squared_norm(1), Vector::Zero(1), 1.0, -1.0), ContractViolation);
}

TEST(MonotoneAfter, Examples) {
  EXPECT_TRUE(monotone_after({0, 0.8, 0.96, 0.992, 0.9984, 0.99968, 0.999936, 0.9999872, 0.99999744, 0.999999488}, 0));
  EXPECT_FALSE(monotone_after({0, 1.8, 0.36, 1.5, 0.6, 1.3, 0.8, 1.1, 0.9, 1.05}, 0));
  EXPECT_TRUE(monotone_after(std::vector<double>(12, 3.0), 0.2));
  EXPECT_TRUE(monotone_after({5, 0, 1, 2, 3, 4, 5, 6, 7, 8}, 0.1));
  EXPECT_FALSE(monotone_after({5, 0, 1, 2, 3, 4, 5, 6, 7, 8}, 0.0));
}

TEST(MonotoneAfter, RejectsShortTrace) {
  EXPECT_THROW(monotone_after({1, 2, 3}, 0), ContractViolation);
}

TEST(MonotoneAfter, GradientDescentOnShiftedSquare) {
  Objective f;
  f.name = "shifted";
  f.dim = 1;
  f.value = [](const Vector& x) { return (x[0] - 1) * (x[0] - 1); };
  f.gradient = [](const Vector& x) { return Vector::Constant(1, 2 * (x[0] - 1)); };
  for (auto [eta, expected] : {std::pair{0.4, true}, std::pair{0.9, false}}) {
    std::vector<double> xs{0.0};
    Vector x = Vector::Zero(1);
    for (int t = 0; t < 30; ++t) {
      x -= eta * f.gradient(x);
      xs.push_back(x[0]);
    }
    EXPECT_EQ(monotone_after(xs, 0), expected) << eta;
  }
}

RunTrace synthetic_trace(std::string algorithm, std::vector<double> fs, std::uint64_t seed = 0) {
  RunTrace t;
  t.algorithm = std::move(algorithm);
  t.problem = "staircase";
  t.seed = seed;
  for (std::size_t k = 0; k < fs.size(); ++k) t.rows.push_back({static_cast<long>(k), fs[k], 0, false, false});
  return t;
}

TEST(EscapeSummary, PlateauNeverCrosses) {
  const auto rows = escape_summary({synthetic_trace("gd", std::vector<double>(50, 0.25))}, 0.1);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].steps_to_threshold);
  EXPECT_EQ(rows[0].best_f, 0.25);
}

TEST(EscapeSummary, FirstCrossing) {
  std::vector<double> fs(400, 0.25);
  for (std::size_t t = 312; t < fs.size(); ++t) fs[t] = 0.05;
  RunTrace tr = synthetic_trace("pgdot", fs);
  tr.n_perturbations = 4;
  const auto rows = escape_summary({tr}, 0.1);
  EXPECT_EQ(rows[0].steps_to_threshold, 312);
  EXPECT_EQ(rows[0].n_perturbations, 4);
}

TEST(EscapeSummary, SortedAndDeterministic) {
  std::vector<RunTrace> traces{synthetic_trace("pgdot", {1, 0}, 2), synthetic_trace("gd", {1, 1}, 1),
                               synthetic_trace("pgdot", {1, 0.5}, 1)};
  const auto a = escape_summary(traces, 0.6);
  const auto b = escape_summary(traces, 0.6);
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0].algorithm, "gd");
  EXPECT_EQ(a[1].seed, 1u);
  EXPECT_EQ(a[2].seed, 2u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].algorithm, b[k].algorithm);
    EXPECT_EQ(a[k].steps_to_threshold, b[k].steps_to_threshold);
    EXPECT_EQ(a[k].best_f, b[k].best_f);
  }
}

TEST(EscapeSummary, RejectsMixedObjectives) {
  RunTrace other = synthetic_trace("gd", {1, 1});
  other.problem = "reglq";
  EXPECT_THROW(escape_summary({synthetic_trace("gd", {1, 1}), other}, 0.5), ContractViolation);
}

}  // namespace
}  // namespace pgdot
