#include "lml/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

namespace lml {
namespace {

TEST(BinaryEntropy, SymmetricPoint) {
  const std::vector<double> one{0.5};
  EXPECT_NEAR(binary_entropy(one), std::log(2.0), 1e-15);
  const std::vector<double> two{0.5, 0.5};
  EXPECT_NEAR(binary_entropy(two), 2.0 * std::log(2.0), 1e-15);
}

TEST(BinaryEntropy, AsymmetricPair) {
  // 2 * (-0.9 log 0.9 - 0.1 log 0.1), 50-digit evaluation.
  const std::vector<double> y{0.9, 0.1};
  EXPECT_NEAR(binary_entropy(y), 0.65016594678289647901, 1e-15);
}

TEST(BinaryEntropy, RejectsBoundary) {
  for (double bad : {0.0, 1.0, -0.1, 1.5}) {
    const std::vector<double> y{0.5, bad};
    EXPECT_THROW(binary_entropy(y), std::domain_error);
  }
}

TEST(ShannonEntropy, Values) {
  const std::vector<double> one{1.0};
  EXPECT_EQ(shannon_entropy(one), 0.0);
  const std::vector<double> half{0.5, 0.5};
  EXPECT_NEAR(shannon_entropy(half), std::log(2.0), 1e-15);
  const std::vector<double> skew{0.25, 0.75};
  EXPECT_NEAR(shannon_entropy(skew), 0.56233514461880835029, 1e-15);
  const std::vector<double> bad{0.5, 0.0};
  EXPECT_THROW(shannon_entropy(bad), std::domain_error);
}

const SurfacePoint* find_point(const std::vector<SurfacePoint>& grid,
                               const std::vector<double>& y) {
  for (const auto& p : grid) {
    bool same = true;
    for (std::size_t i = 0; i < y.size(); ++i) same = same && std::abs(p.y[i] - y[i]) < 1e-12;
    if (same) return &p;
  }
  return nullptr;
}

TEST(SurfaceGrid, PointsLieInsidePolytope) {
  for (int n : {3, 4}) {
    for (int k = 1; k < n; ++k) {
      const auto grid = entropy_surface_grid(n, k, Penalty::kBinary, 12);
      ASSERT_FALSE(grid.empty());
      for (const auto& p : grid) {
        double sum = 0.0;
        for (double v : p.y) {
          EXPECT_GT(v, kSurfaceMargin);
          EXPECT_LT(v, 1.0 - kSurfaceMargin);
          sum += v;
        }
        EXPECT_NEAR(sum, k, 1e-12);
      }
    }
  }
}

TEST(SurfaceGrid, SimplexCenterHasLogThree) {
  const auto grid = entropy_surface_grid(3, 1, Penalty::kShannon, 60);
  const SurfacePoint* c = find_point(grid, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  ASSERT_NE(c, nullptr);
  EXPECT_NEAR(c->penalty, std::log(3.0), 1e-12);
}

TEST(SurfaceGrid, BinaryPenaltyAtTwoThirds) {
  // 3 * H_b(2/3), 50-digit evaluation.
  const auto grid = entropy_surface_grid(3, 2, Penalty::kBinary, 60);
  const SurfacePoint* c = find_point(grid, {2.0 / 3, 2.0 / 3, 2.0 / 3});
  ASSERT_NE(c, nullptr);
  EXPECT_NEAR(c->penalty, 1.9095425048844384554, 1e-12);
  const auto top = std::max_element(grid.begin(), grid.end(),
                                    [](const auto& a, const auto& b) { return a.penalty < b.penalty; });
  EXPECT_EQ(&*top, c);
}

TEST(SurfaceGrid, MaximumAtCenter) {
  for (Penalty pen : {Penalty::kBinary, Penalty::kShannon}) {
    for (int n : {3, 4}) {
      for (int k = 1; k < n; ++k) {
        const auto grid = entropy_surface_grid(n, k, pen, 60);
        const auto top = std::max_element(grid.begin(), grid.end(),
                                          [](const auto& a, const auto& b) { return a.penalty < b.penalty; });
        for (double v : top->y) EXPECT_NEAR(v, static_cast<double>(k) / n, 1e-12);
      }
    }
  }
}

TEST(SurfaceGrid, RejectsInvalidArguments) {
  EXPECT_THROW(entropy_surface_grid(5, 1, Penalty::kBinary, 10), std::domain_error);
  EXPECT_THROW(entropy_surface_grid(3, 3, Penalty::kBinary, 10), std::domain_error);
  EXPECT_THROW(entropy_surface_grid(3, 0, Penalty::kBinary, 10), std::domain_error);
  EXPECT_THROW(entropy_surface_grid(3, 1, Penalty::kBinary, 1), std::invalid_argument);
  EXPECT_THROW(parse_penalty("renyi"), std::invalid_argument);
}

}  // namespace
}  // namespace lml
