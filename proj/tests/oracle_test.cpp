#include "lml/oracle.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "random_inputs.hpp"

namespace lml::oracle {
namespace {

TEST(ReferenceProject, SymmetricPair) {
  const std::vector<double> x{0.0, 0.0};
  const LmlPoint y = reference_project(x, 1);
  EXPECT_NEAR(y.probs[0], 0.5, 1e-15);
  EXPECT_NEAR(y.probs[1], 0.5, 1e-15);
  EXPECT_NEAR(y.dual, 0.0, 1e-14);
}

TEST(ReferenceProject, WideSpreadStillFeasible) {
  std::vector<double> x(11);
  for (int i = 0; i < 11; ++i) x[i] = -30.0 + 6.0 * i;
  const LmlPoint y = reference_project(x, 1);
  EXPECT_NEAR(std::accumulate(y.probs.begin(), y.probs.end(), 0.0), 1.0, 1e-8);
}

TEST(ReferenceProject, AgreesWithBracketingSolver) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    const int n = testing::uniform_int(rng, 2, 40);
    const int k = testing::uniform_int(rng, 1, n - 1);
    const auto x = testing::normal_vector(rng, n, 3.0);
    const LmlPoint ref = reference_project(x, k);
    const LmlPoint got = lml_project(x, k);
    EXPECT_LT(testing::max_abs_diff(ref.probs, got.probs), 1e-10);
  }
}

TEST(CheckKkt, AcceptsSolverOutput) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const int n = testing::uniform_int(rng, 2, 30);
    const int k = testing::uniform_int(rng, 1, n - 1);
    const auto x = testing::normal_vector(rng, n, 4.0);
    const KktReport r = check_kkt(x, lml_project(x, k));
    EXPECT_TRUE(r.passed) << "stationarity " << r.stationarity
                          << " feasibility " << r.feasibility;
  }
}

TEST(CheckKkt, RejectsPerturbedPoint) {
  const std::vector<double> x{3.0, 1.0, 0.0, -1.0};
  LmlPoint y = lml_project(x, 2);
  y.probs[0] += 1e-3;
  y.probs[1] -= 1e-3;
  const KktReport r = check_kkt(x, y);
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.stationarity, 1e-4);
  EXPECT_LT(r.feasibility, 1e-12);
}

TEST(CheckKkt, FlagsInfeasibleAndBoundaryPoints) {
  const std::vector<double> x{0.0, 0.0, 0.0};
  LmlPoint y;
  y.k = 1;
  y.dual = std::log(0.5);
  y.probs = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  EXPECT_TRUE(check_kkt(x, y).passed);

  y.probs = {0.5, 0.5, 0.5};
  EXPECT_FALSE(check_kkt(x, y).passed);
  y.probs = {1.0, 0.0, 0.0};
  EXPECT_FALSE(check_kkt(x, y).interior);
}

TEST(FiniteDiff, LinearAndQuadratic) {
  const VectorFn identity = [](std::span<const double> v) {
    return std::vector<double>(v.begin(), v.end());
  };
  const std::vector<double> x{1.0, -2.0};
  const std::vector<double> dir{0.3, 0.7};
  const auto jvp = finite_diff_jvp(identity, x, dir);
  EXPECT_NEAR(jvp[0], 0.3, 1e-9);
  EXPECT_NEAR(jvp[1], 0.7, 1e-9);

  const auto square = [](std::span<const double> v) { return v[0] * v[0]; };
  const std::vector<double> one{1.0};
  EXPECT_NEAR(finite_diff_gradient(square, one)[0], 2.0, 1e-8);
}

TEST(FiniteDiff, ProjectionJvpMatchesBackward) {
  // <v, J u> from the solver's backward pass against a central difference.
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const int n = testing::uniform_int(rng, 3, 20);
    const int k = testing::uniform_int(rng, 1, n - 1);
    const auto x = testing::normal_vector(rng, n);
    const auto u = testing::normal_vector(rng, n);
    const auto v = testing::normal_vector(rng, n);
    const VectorFn f = [k](std::span<const double> z) { return lml_project(z, k).probs; };
    const auto ju = finite_diff_jvp(f, x, u);
    const auto jtv = lml_backward(lml_project(x, k), v);
    const double lhs = std::inner_product(v.begin(), v.end(), ju.begin(), 0.0);
    const double rhs = std::inner_product(u.begin(), u.end(), jtv.begin(), 0.0);
    EXPECT_NEAR(lhs, rhs, 1e-6 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(RelativeError, Values) {
  const std::vector<double> a{3.0, 4.0};
  const std::vector<double> b{3.0, 4.0};
  EXPECT_EQ(relative_error(a, b), 0.0);
  const std::vector<double> c{0.0, 0.0};
  EXPECT_DOUBLE_EQ(relative_error(a, c), 1.0);
  const std::vector<double> tiny{1e-15, 0.0};
  EXPECT_DOUBLE_EQ(relative_error(tiny, c), 1e-15);
}

}  // namespace
}  // namespace lml::oracle
