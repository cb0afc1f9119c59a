#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hierloc/errors.hpp"
#include "hierloc/loss.hpp"

using namespace hierloc;
using namespace hierloc::training;

namespace {

struct LossFixture {
  ParameterStore store;
  GwhLoss loss;
  explicit LossFixture(LossConfig cfg) : loss(cfg, store) {}

  double eval(const Matrix& d, const std::vector<int>& pos, const Matrix& angles, int level = 0) {
    ad::Tape t;
    auto leaves = store.bind(t, false);
    if (leaves.empty()) leaves.push_back(t.constant(Matrix::Zero(1, 1)));
    std::mt19937_64 rng(0);
    return loss.level_loss(leaves, level, t.constant(d), pos, angles, rng).scalar();
  }
};

// Plain InfoNCE as cross-entropy of softmax(-d / tau).
double plain_infonce(const Matrix& d, const std::vector<int>& pos, double tau) {
  double total = 0;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    Eigen::ArrayXd logits = -d.row(i).transpose().array() / tau;
    const double m = logits.maxCoeff();
    total += -(logits[pos[i]] - m - std::log((logits - m).exp().sum()));
  }
  return total / d.rows();
}

}  // namespace

TEST(GwhLoss, SymmetricTwoWay) {
  LossConfig cfg;
  cfg.lambda = 0.0;
  LossFixture f(cfg);
  Matrix d(1, 2);
  d << 0.7, 0.7;
  EXPECT_NEAR(f.eval(d, {0}, Matrix::Zero(1, 2)), std::log(2.0), 1e-12);
}

TEST(GwhLoss, LambdaZeroIsPlainInfoNce) {
  LossConfig cfg;
  cfg.lambda = 0.0;
  LossFixture f(cfg);
  EXPECT_FALSE(f.store.contains("loss.lambda_raw"));
  std::mt19937_64 rng(1);
  Matrix d = gaussian(5, 7, 1.0, rng).cwiseAbs();
  Matrix g = gaussian(5, 7, 0.3, rng).cwiseAbs();
  std::vector<int> pos = {0, 6, 2, 3, 1};
  EXPECT_NEAR(f.eval(d, pos, g), plain_infonce(d, pos, 0.1), 1e-10);
}

TEST(GwhLoss, FarNegativesGiveZeroLoss) {
  LossFixture f(LossConfig{});
  Matrix d(1, 3);
  d << 0.2, 0.2 + 50 * 0.1, 0.2 + 50 * 0.1;
  EXPECT_LT(f.eval(d, {0}, Matrix::Zero(1, 3)), 1e-6);
}

TEST(GwhLoss, GeoWeightsMatchDirectFormula) {
  LossConfig cfg;
  LossFixture f(cfg);
  Matrix d(2, 3), g(2, 3);
  d << 0.1, 0.3, 0.5, 0.4, 0.2, 0.6;
  g << 0.0, 0.05, 0.4, 0.2, 0.0, 0.1;
  std::vector<int> pos = {0, 1};
  double ref = 0;
  for (int i = 0; i < 2; ++i) {
    double num = std::exp(-d(i, pos[i]) / 0.1);
    double den = num;
    for (int j = 0; j < 3; ++j)
      if (j != pos[i]) den += geo::geo_weight(g(i, j), 1.0, {geo::KernelKind::Laplace, 0.1, 1.0}) * std::exp(-d(i, j) / 0.1);
    ref += -std::log(num / den);
  }
  EXPECT_NEAR(f.eval(d, pos, g), ref / 2, 1e-10);
  EXPECT_NEAR(f.loss.tau_value(f.store, 0), 0.1, 1e-14);
  EXPECT_NEAR(f.loss.lambda_value(f.store, 2), 1.0, 1e-14);
  EXPECT_NEAR(f.loss.sigma_value(f.store, 3), 0.1, 1e-14);
}

TEST(GwhLoss, ZeroNegativesIsError) {
  LossFixture f(LossConfig{});
  EXPECT_THROW(f.eval(Matrix::Zero(1, 1), {0}, Matrix::Zero(1, 1)), ContractViolation);
}

TEST(GwhLoss, PerLevelScalarsAndFixedScalars) {
  LossConfig cfg;
  cfg.per_level_scalars = true;
  LossFixture f(cfg);
  EXPECT_TRUE(f.store.contains("loss.tau_raw.city"));
  EXPECT_TRUE(f.store.contains("loss.sigma_raw.country"));
  cfg.learn_scalars = false;
  LossFixture fixed(cfg);
  EXPECT_EQ(fixed.store.size(), 0u);
}

TEST(GwhLoss, SampledNegatives) {
  LossConfig cfg;
  cfg.lambda = 0.0;
  cfg.negatives = 1;
  LossFixture f(cfg);
  Matrix d(1, 4);
  d << 0.5, 0.5, 9.0, 9.0;
  const double v = f.eval(d, {0}, Matrix::Zero(1, 4));
  const bool near_neg = std::fabs(v - std::log(2.0)) < 1e-9;
  const bool far_neg = v < 1e-6;
  EXPECT_TRUE(near_neg || far_neg) << v;
}

TEST(TotalLoss, BetaWeighting) {
  ad::Tape t;
  std::vector<Var> l;
  for (double v : {1.0, 2.0, 3.0, 4.0}) l.push_back(t.leaf(Matrix::Constant(1, 1, v)));
  EXPECT_DOUBLE_EQ(total_loss(l, {1, 1, 1, 1}).scalar(), 10.0);
  EXPECT_DOUBLE_EQ(total_loss(l, {1, 0, 0, 0}).scalar(), 1.0);
  EXPECT_DOUBLE_EQ(total_loss(l, {2, 2, 2, 2}).scalar(), 20.0);
  EXPECT_DOUBLE_EQ(total_loss(l, {0.5, 1, 0, 2}).scalar(), 10.5);
  EXPECT_THROW(total_loss(l, {1, -1, 1, 1}), ContractViolation);
  std::vector<Var> partial = {l[0], Var{}, Var{}, Var{}};
  EXPECT_DOUBLE_EQ(total_loss(partial, {1, 0, 0, 0}).scalar(), 1.0);
}

TEST(AngleMatrix, Haversine) {
  auto g = angle_matrix({{0, 0}, {10, 10}}, {{0, 90}, {10, 10}, {0, 0}});
  EXPECT_NEAR(g(0, 0), std::acos(-1.0) / 4, 1e-15);
  EXPECT_EQ(g(1, 1), 0.0);
  EXPECT_EQ(g(0, 2), 0.0);
}

TEST(LossConfig, Validation) {
  LossConfig c;
  c.tau = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = LossConfig{};
  c.beta[2] = -1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = LossConfig{};
  c.sigma = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}
