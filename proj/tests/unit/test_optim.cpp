#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hierloc/manifold.hpp"
#include "hierloc/optim.hpp"

using namespace hierloc;
using namespace hierloc::training;

TEST(AdamW, ZeroGradientNoDecayIsIdentity) {
  AdamConfig cfg;
  cfg.weight_decay = 0.0;
  Matrix x = Matrix::Constant(2, 2, 1.5);
  Moments s;
  adamw_update(x, Matrix::Zero(2, 2), s, 1, cfg);
  EXPECT_EQ(x, Matrix::Constant(2, 2, 1.5));
}

TEST(AdamW, FirstStepMovesByLr) {
  AdamConfig cfg;
  cfg.weight_decay = 0.0;
  Matrix x = Matrix::Constant(1, 1, 1.0);
  Moments s;
  adamw_update(x, 2.0 * x, s, 1, cfg);
  // m_hat = g, v_hat = g^2: step = lr * g / (|g| + eps).
  EXPECT_NEAR(x(0, 0), 1.0 - cfg.lr * 2.0 / (2.0 + cfg.eps), 1e-15);
}

TEST(AdamW, DecoupledWeightDecay) {
  AdamConfig cfg;
  cfg.lr = 0.1;
  cfg.weight_decay = 0.5;
  Matrix x = Matrix::Constant(1, 1, 2.0);
  Moments s;
  adamw_update(x, Matrix::Zero(1, 1), s, 1, cfg);
  EXPECT_NEAR(x(0, 0), 2.0 * (1 - 0.1 * 0.5), 1e-15);
}

TEST(AdamW, DeterministicTrajectories) {
  auto run = [] {
    AdamConfig cfg;
    cfg.lr = 0.01;
    Matrix x = Matrix::Constant(3, 1, 1.0);
    Moments s;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n;
    for (int t = 1; t <= 50; ++t) {
      Matrix g = 2 * x;
      for (Eigen::Index i = 0; i < g.size(); ++i) g(i) += 0.1 * n(rng);
      adamw_update(x, g, s, t, cfg);
    }
    return x;
  };
  EXPECT_EQ(run(), run());
}

TEST(RiemannianAdam, ZeroGradientIsIdentityAndProjectionHolds) {
  const double k = 0.8;
  auto p = manifold::exp_origin({Eigen::Vector2d(0.3, -1.1), manifold::Curvature(k)});
  Matrix x = p.coords().transpose();
  Moments s;
  AdamConfig cfg;
  int drift = riemannian_adam_update(x, Matrix::Zero(1, 3), s, 1, cfg, k);
  EXPECT_EQ(drift, 0);
  EXPECT_LE((x - p.coords().transpose()).norm(), 1e-15 * x.norm());

  cfg.lr = 0.05;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  for (int t = 1; t <= 200; ++t) {
    Matrix g(1, 3);
    g << n(rng), n(rng), n(rng);
    riemannian_adam_update(x, g, s, t + 1, cfg, k);
    EXPECT_LE(manifold::constraint_residual(x.row(0).transpose(), manifold::Curvature(k)), 1e-9);
    EXPECT_GT(x(0, 0), 0.0);
  }
}

TEST(RiemannianAdam, ConvergesToTarget) {
  const double k = 0.8;
  const manifold::Curvature c(k);
  auto target = manifold::exp_origin({Eigen::Vector2d(1.2, -0.7), c});
  Matrix x = manifold::exp_origin({Eigen::Vector2d(-0.5, 0.9), c}).coords().transpose();
  AdamConfig cfg;
  cfg.lr = 5e-3;
  cfg.weight_decay = 0.0;
  Moments s;
  double d2 = 0;
  for (int t = 1; t <= 2000; ++t) {
    ad::Tape tape;
    ad::Var xv = tape.leaf(x);
    ad::Var d = ad::sum(ad::lorentz_distance(xv, tape.constant(target.coords().transpose()), k, true));
    tape.backward(d);
    d2 = d.scalar();
    riemannian_adam_update(x, xv.grad(), s, t, cfg, k);
  }
  auto p = manifold::LorentzPoint::unchecked(x.row(0).transpose(), c);
  d2 = std::pow(manifold::geodesic_distance(p, target), 2);
  EXPECT_LE(d2, 1e-4);
}

TEST(Optimizers, StoreStepsAndFiniteCheck) {
  ParameterStore store;
  store.add("w", Matrix::Constant(2, 2, 1.0));
  store.add("a", manifold::origin(manifold::Curvature(1.0), 2).coords().transpose(), ParamKind::Manifold);
  std::vector<Matrix> grads = {Matrix::Constant(2, 2, 0.5), Matrix(1, 3)};
  grads[1] << 0.0, 0.3, -0.2;
  AdamW adam(AdamConfig{});
  adam.step(store, grads, {0});
  EXPECT_LT(store.at("w").value(0, 0), 1.0);
  AdamConfig rc;
  rc.weight_decay = 0.0;
  RiemannianAdam radam(rc, 1.0);
  radam.step(store, grads, {1});
  EXPECT_LE(manifold::constraint_residual(store.at("a").value.row(0).transpose(), manifold::Curvature(1.0)), 1e-12);
  EXPECT_EQ(radam.drift_warnings(), 0);

  grads[0](1, 1) = std::nan("");
  try {
    check_finite(store, grads);
    FAIL() << "expected error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("w"), std::string::npos);
  }
  EXPECT_THROW(adam.step(store, grads, {0}), std::runtime_error);
}

TEST(ClipGradients, Examples) {
  std::vector<Matrix> g = {Matrix::Constant(1, 1, 6.0), Matrix::Constant(1, 1, 8.0)};
  EXPECT_DOUBLE_EQ(global_norm(g), 10.0);
  auto orig = g;
  EXPECT_DOUBLE_EQ(clip_gradients(g, 1.0), 10.0);
  EXPECT_NEAR(global_norm(g), 1.0, 1e-15);
  const double cosine = (orig[0](0) * g[0](0) + orig[1](0) * g[1](0)) / (10.0 * global_norm(g));
  EXPECT_NEAR(cosine, 1.0, 1e-15);
  std::vector<Matrix> small = {Matrix::Constant(1, 2, 0.1)};
  auto before = small;
  clip_gradients(small, 1.0);
  EXPECT_EQ(small[0], before[0]);
}

TEST(AdamConfig, Validation) {
  AdamConfig c;
  c.lr = -1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = AdamConfig{};
  c.beta2 = 1.0;
  EXPECT_THROW(c.validate(), ConfigError);
}
