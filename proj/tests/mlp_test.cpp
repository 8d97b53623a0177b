#include "lml/mlp.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lml/oracle.hpp"
#include "random_inputs.hpp"

namespace lml {
namespace {

// Straightforward loops, no Eigen expressions.
std::vector<double> naive_forward(const MlpModel& m, std::vector<double> act) {
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const auto& w = m.layers[l].weight;
    std::vector<double> next(static_cast<std::size_t>(w.rows()));
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      double s = m.layers[l].bias[i];
      for (Eigen::Index j = 0; j < w.cols(); ++j) s += w(i, j) * act[static_cast<std::size_t>(j)];
      next[static_cast<std::size_t>(i)] = (l + 1 < m.layers.size()) ? std::max(s, 0.0) : s;
    }
    act = std::move(next);
  }
  return act;
}

TEST(Mlp, ShapesAndParameterCount) {
  const MlpModel m = MlpModel::random(5, {7, 3}, 4, 1);
  ASSERT_EQ(m.layers.size(), 3u);
  EXPECT_EQ(m.input_dim(), 5);
  EXPECT_EQ(m.output_dim(), 4);
  EXPECT_EQ(m.parameter_count(), 5u * 7 + 7 + 7 * 3 + 3 + 3 * 4 + 4);
  EXPECT_THROW(MlpModel::random(0, {}, 3, 0), std::invalid_argument);
  EXPECT_THROW(MlpModel::random(3, {0}, 3, 0), std::invalid_argument);
}

TEST(Mlp, ZeroModelGivesZeroScores) {
  const MlpModel m = MlpModel::zeros(3, {4}, 2);
  const std::vector<double> f{1.0, -2.0, 3.0};
  EXPECT_EQ(forward(m, f), (std::vector<double>{0.0, 0.0}));
}

TEST(Mlp, LinearLayerPicksColumn) {
  MlpModel m = MlpModel::random(3, {}, 4, 9);
  const std::vector<double> e1{1.0, 0.0, 0.0};
  const auto s = forward(m, e1);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(s[i], m.layers[0].weight(i, 0));
}

TEST(Mlp, MatchesNaiveLoops) {
  std::mt19937_64 rng(4);
  const MlpModel m = MlpModel::random(6, {8, 5}, 3, 11);
  for (int t = 0; t < 20; ++t) {
    const auto f = testing::normal_vector(rng, 6);
    const auto got = forward(m, f);
    const auto want = naive_forward(m, f);
    EXPECT_LT(testing::max_abs_diff(got, want), 1e-12);
  }
}

TEST(Mlp, RandomInitIsSeeded) {
  EXPECT_EQ(MlpModel::random(4, {3}, 2, 5).digest(),
            MlpModel::random(4, {3}, 2, 5).digest());
  EXPECT_NE(MlpModel::random(4, {3}, 2, 5).digest(),
            MlpModel::random(4, {3}, 2, 6).digest());
  EXPECT_EQ(MlpModel::random(4, {3}, 2, 5).digest().size(), 16u);
}

TEST(Mlp, DigestTracksParameters) {
  MlpModel m = MlpModel::random(4, {3}, 2, 5);
  const std::string before = m.digest();
  m.layers[1].bias[0] = std::nextafter(m.layers[1].bias[0], 1.0);
  EXPECT_NE(m.digest(), before);
}

TEST(Mlp, ZeroUpstreamGivesZeroGradients) {
  const MlpModel m = MlpModel::random(4, {6}, 3, 2);
  const std::vector<double> f{0.3, -1.0, 2.0, 0.5};
  const std::vector<double> zero(3, 0.0);
  const MlpGradients g = backward(m, f, zero);
  for (const auto& l : g.layers) {
    EXPECT_EQ(l.weight.norm(), 0.0);
    EXPECT_EQ(l.bias.norm(), 0.0);
  }
}

TEST(Mlp, LinearGradientIsOuterProduct) {
  const MlpModel m = MlpModel::random(3, {}, 2, 2);
  const std::vector<double> f{1.0, 2.0, -1.0};
  const std::vector<double> up{0.5, -3.0};
  const MlpGradients g = backward(m, f, up);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(g.layers[0].bias[i], up[i]);
    for (int j = 0; j < 3; ++j) EXPECT_EQ(g.layers[0].weight(i, j), up[i] * f[j]);
  }
}

TEST(Mlp, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(8);
  MlpModel m = MlpModel::random(4, {5, 6}, 3, 21);
  for (auto& l : m.layers) l.bias.setConstant(0.1);  // keep ReLUs away from 0
  const auto f = testing::normal_vector(rng, 4);
  const auto up = testing::normal_vector(rng, 3);
  const MlpGradients g = backward(m, f, up);

  std::vector<double> analytic;
  std::vector<double*> params;
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    for (Eigen::Index i = 0; i < m.layers[l].weight.size(); ++i) {
      params.push_back(m.layers[l].weight.data() + i);
      analytic.push_back(g.layers[l].weight.data()[i]);
    }
    for (Eigen::Index i = 0; i < m.layers[l].bias.size(); ++i) {
      params.push_back(m.layers[l].bias.data() + i);
      analytic.push_back(g.layers[l].bias[i]);
    }
  }
  ASSERT_EQ(params.size(), m.parameter_count());

  const auto objective = [&] {
    const auto s = forward(m, f);
    double v = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) v += s[i] * up[i];
    return v;
  };
  std::vector<double> numeric(params.size());
  const double h = 1e-6;
  for (std::size_t p = 0; p < params.size(); ++p) {
    const double saved = *params[p];
    *params[p] = saved + h;
    const double plus = objective();
    *params[p] = saved - h;
    const double minus = objective();
    *params[p] = saved;
    numeric[p] = (plus - minus) / (2 * h);
  }
  EXPECT_LT(oracle::relative_error(analytic, numeric), 1e-6);
}

TEST(Mlp, SgdStepMovesAgainstGradient) {
  MlpModel m = MlpModel::random(3, {4}, 2, 3);
  const MlpModel start = m;
  const std::vector<double> f{1.0, 0.5, -0.5};
  const std::vector<double> up{1.0, -1.0};
  const MlpGradients g = backward(m, f, up);
  sgd_step(m, g, 0.25);
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const Eigen::MatrixXd want = start.layers[l].weight - 0.25 * g.layers[l].weight;
    EXPECT_EQ((m.layers[l].weight - want).norm(), 0.0);
  }
  const std::string before = m.digest();
  sgd_step(m, g, 0.0);
  EXPECT_EQ(m.digest(), before);
}

TEST(Mlp, RejectsMismatchedShapes) {
  const MlpModel m = MlpModel::random(3, {4}, 2, 3);
  const std::vector<double> short_f{1.0, 2.0};
  EXPECT_THROW(forward(m, short_f), std::invalid_argument);
  const std::vector<double> f{1.0, 2.0, 3.0};
  const std::vector<double> bad_up{1.0, 2.0, 3.0};
  EXPECT_THROW(backward(m, f, bad_up), std::invalid_argument);
}

}  // namespace
}  // namespace lml
