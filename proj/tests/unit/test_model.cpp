#include <random>

#include <gtest/gtest.h>

#include "hierloc/gradcheck.hpp"
#include "hierloc/manifold.hpp"
#include "hierloc/model.hpp"

using namespace hierloc;
using namespace hierloc::model;

namespace {

constexpr std::array<int, 4> kCounts = {2, 3, 4, 5};
constexpr std::size_t kIn = 10, kImg = 6;

ModelConfig small_config() {
  ModelConfig c;
  c.dim = 8;
  c.hidden = 12;
  c.heads = 2;
  c.dropout = 0.0;
  return c;
}

std::array<Matrix, 4> entity_feats(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::array<Matrix, 4> f;
  for (int l = 0; l < 4; ++l) f[l] = gaussian(kCounts[l], kIn, 1.0, rng);
  return f;
}

double max_residual(const Matrix& rows, double k) {
  double worst = 0;
  for (Eigen::Index i = 0; i < rows.rows(); ++i)
    worst = std::max(worst, manifold::constraint_residual(rows.row(i).transpose(), manifold::Curvature(k)));
  return worst;
}

struct Fixture {
  ParameterStore store;
  Model model;
  explicit Fixture(ModelConfig cfg = small_config(), std::uint64_t seed = 1)
      : model(cfg, kCounts, kIn, kImg, store, seed) {}
};

}  // namespace

TEST(ModelConfig, Validation) {
  auto c = small_config();
  c.heads = 3;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config();
  c.dropout = 1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_EQ(parse_geometry("euclidean-ablation"), Geometry::Euclidean);
  EXPECT_THROW(parse_geometry("spherical"), ConfigError);
  c = small_config();
  c.geometry = Geometry::Euclidean;
  EXPECT_EQ(c.effective_anchor_mode(), AnchorMode::Tangent);
}

TEST(Model, ParameterLayout) {
  Fixture f;
  EXPECT_EQ(f.store.at("entity.anchor.country").kind, ParamKind::Manifold);
  EXPECT_EQ(f.store.at("entity.anchor.city").value.rows(), 5);
  EXPECT_EQ(f.store.at("entity.anchor.city").value.cols(), 9);
  EXPECT_EQ(f.store.at("entity.alpha").value(0, 0), 0.1);
  EXPECT_EQ(f.store.at("image.alpha").value(0, 0), 0.1);
  EXPECT_TRUE(f.store.at("fuse.1.W").value.isZero());
  EXPECT_TRUE(f.store.at("fuse.1.b").value.isZero());
  EXPECT_EQ(f.store.at("attn.region.q.W").value.rows(), 8);
  EXPECT_LE(max_residual(f.store.at("entity.anchor.subregion").value, 0.8), 1e-12);

  auto c = small_config();
  c.anchor_mode = AnchorMode::Tangent;
  Fixture t(c);
  EXPECT_EQ(t.store.at("entity.anchor.country").kind, ParamKind::Euclidean);
  EXPECT_EQ(t.store.at("entity.anchor.country").value.cols(), 8);
}

TEST(Model, DeterministicInit) {
  Fixture a, b;
  for (std::size_t i = 0; i < a.store.size(); ++i) EXPECT_EQ(a.store[i].value, b.store[i].value) << a.store[i].name;
}

TEST(EmbedEntities, OnManifoldAndAlphaZero) {
  Fixture f;
  auto feats = entity_feats(2);
  {
    ad::Tape t;
    auto leaves = f.store.bind(t, false);
    std::mt19937_64 rng(0);
    auto e = f.model.embed_entities(leaves, feats, false, rng);
    for (int l = 0; l < 4; ++l) EXPECT_LE(max_residual(e.points[l].value(), 0.8), 1e-8);
  }
  f.store.at("entity.alpha").value(0, 0) = 0.0;
  ad::Tape t;
  auto leaves = f.store.bind(t, false);
  std::mt19937_64 rng(0);
  auto e = f.model.embed_entities(leaves, feats, false, rng);
  for (int l = 0; l < 4; ++l) {
    const Matrix& a = f.store.at(std::string("entity.anchor.") + data::kLevelNames[l]).value;
    EXPECT_LE((e.points[l].value() - a).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(EmbedEntities, ZeroAnchorZeroDeltaIsOrigin) {
  Fixture f;
  for (int l = 0; l < 4; ++l) {
    Matrix& a = f.store.at(std::string("entity.anchor.") + data::kLevelNames[l]).value;
    a.setZero();
    a.col(0).setConstant(std::sqrt(0.8));
  }
  f.store.at("entity.delta.W").value.setZero();
  f.store.at("entity.delta.b").value.setZero();
  ad::Tape t;
  auto leaves = f.store.bind(t, false);
  std::mt19937_64 rng(0);
  auto e = f.model.embed_entities(leaves, entity_feats(3), false, rng);
  Matrix o = manifold::origin(manifold::Curvature(0.8), 8).coords().transpose();
  for (int l = 0; l < 4; ++l)
    for (Eigen::Index i = 0; i < e.points[l].rows(); ++i) EXPECT_LE((e.points[l].value().row(i) - o).norm(), 1e-15);
}

TEST(EmbedImages, AlphaZeroIsOriginAndDeterministic) {
  Fixture f;
  std::mt19937_64 g(4);
  Matrix phi = gaussian(3, kImg, 1.0, g);
  phi.row(2) = phi.row(0);
  ad::Tape t;
  auto leaves = f.store.bind(t, false);
  std::mt19937_64 rng(0);
  Var z = f.model.embed_images(leaves, phi, false, rng);
  EXPECT_LE(max_residual(z.value(), 0.8), 1e-8);
  EXPECT_LE((z.value().row(0) - z.value().row(2)).norm(), 1e-14);

  f.store.at("image.alpha").value(0, 0) = 0.0;
  ad::Tape t2;
  auto l2 = f.store.bind(t2, false);
  Var z0 = f.model.embed_images(l2, phi, false, rng);
  EXPECT_DOUBLE_EQ(z0.value()(1, 0), std::sqrt(0.8));
  EXPECT_EQ(z0.value().rightCols(8).norm(), 0.0);
  EXPECT_THROW(f.model.embed_images(l2, Matrix::Zero(2, 3), false, rng), ContractViolation);
}

TEST(Attention, SingleKeyAndIdenticalKeys) {
  Fixture f;
  std::mt19937_64 g(5);
  ad::Tape t;
  auto leaves = f.store.bind(t, false);
  Matrix q1 = gaussian(2, 8, 1.0, g);
  Matrix key = gaussian(1, 8, 1.0, g);
  Var out = f.model.attention(leaves, 0, t.constant(q1), t.constant(key), nullptr);
  EXPECT_LE((out.value().row(0) - out.value().row(1)).norm(), 1e-14);
  const auto& s = f.store;
  Matrix v = key * s.at("attn.country.v.W").value + s.at("attn.country.v.b").value;
  Matrix o = v * s.at("attn.country.o.W").value + s.at("attn.country.o.b").value;
  EXPECT_LE((out.value().row(0) - o).norm(), 1e-13);

  Matrix same = key.replicate(4, 1);
  Var out4 = f.model.attention(leaves, 0, t.constant(q1), t.constant(same), nullptr);
  EXPECT_LE((out4.value() - out.value()).norm(), 1e-13);
  EXPECT_THROW(f.model.attention(leaves, 0, t.constant(q1), t.constant(Matrix(0, 8)), nullptr), ContractViolation);
}

TEST(Attention, QueryGradientMatchesFiniteDifferences) {
  Fixture f;
  std::mt19937_64 g(6);
  Matrix keys = gaussian(5, 8, 1.0, g);
  Matrix q = gaussian(2, 8, 1.0, g);
  auto rep = ad::check_gradients(
      [&](ad::Tape& t, const std::vector<Var>& x) {
        auto leaves = f.store.bind(t, false);
        Var out = f.model.attention(leaves, 1, x[0], t.constant(keys), nullptr);
        return ad::sum(ad::square(out));
      },
      {q});
  EXPECT_LE(rep.max_rel_error, 1e-4) << rep.to_json().dump();
}

TEST(Refine, IdentityAtInitAndPermutationInvariant) {
  Fixture f;
  std::mt19937_64 g(7);
  ad::Tape t;
  auto leaves = f.store.bind(t, false);
  std::mt19937_64 rng(0);
  auto feats = entity_feats(8);
  auto ent = f.model.embed_entities(leaves, feats, false, rng);
  Matrix phi = gaussian(3, kImg, 1.0, g);
  Var z = f.model.embed_images(leaves, phi, false, rng);
  Var zs = f.model.refine(leaves, z, ent);
  EXPECT_LE((zs.value() - z.value()).cwiseAbs().maxCoeff(), 1e-12);

  std::mt19937_64 ri(9);
  f.store.at("fuse.1.W").value = gaussian(12, 8, 0.5, ri);
  ad::Tape t2;
  auto l2 = f.store.bind(t2, false);
  auto ent2 = f.model.embed_entities(l2, feats, false, rng);
  Var zs2 = f.model.refine(l2, f.model.embed_images(l2, phi, false, rng), ent2);
  EXPECT_LE(max_residual(zs2.value(), 0.8), 1e-8);
  EXPECT_GT((zs2.value() - z.value()).norm(), 1e-6);

  auto ent3 = ent2;
  Matrix perm = ent2.tangents[3];
  std::vector<int> order = {4, 2, 0, 1, 3};
  for (int i = 0; i < 5; ++i) perm.row(i) = ent2.tangents[3].row(order[i]);
  ent3.tangents[3] = perm;
  Var zs3 = f.model.refine(l2, f.model.embed_images(l2, phi, false, rng), ent3);
  EXPECT_LE((zs3.value() - zs2.value()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Model, EuclideanGeometry) {
  auto c = small_config();
  c.geometry = Geometry::Euclidean;
  Fixture f(c);
  ad::Tape t;
  auto leaves = f.store.bind(t, false);
  std::mt19937_64 rng(0);
  auto ent = f.model.embed_entities(leaves, entity_feats(9), false, rng);
  EXPECT_EQ(ent.points[0].cols(), 8);
  Var d = f.model.distances(ent.points[0], ent.points[1], true);
  EXPECT_EQ(d.rows(), 2);
  EXPECT_EQ(d.cols(), 3);
  EXPECT_NEAR(d.value()(0, 0), (ent.points[0].value().row(0) - ent.points[1].value().row(0)).squaredNorm(), 1e-12);
}

TEST(Model, AttentionCapMatchesDenseWhenCapIsLarge) {
  auto c = small_config();
  c.attention_cap = 100;
  Fixture capped(c);
  Fixture dense;
  std::mt19937_64 g(10);
  Matrix phi = gaussian(3, kImg, 1.0, g);
  std::mt19937_64 ri(11);
  Matrix w = gaussian(12, 8, 0.5, ri);
  capped.store.at("fuse.1.W").value = w;
  dense.store.at("fuse.1.W").value = w;
  auto run = [&](Fixture& f) {
    ad::Tape t;
    auto leaves = f.store.bind(t, false);
    std::mt19937_64 rng(0);
    auto ent = f.model.embed_entities(leaves, entity_feats(12), false, rng);
    return Matrix(f.model.refine(leaves, f.model.embed_images(leaves, phi, false, rng), ent).value());
  };
  EXPECT_EQ(run(capped), run(dense));

  c.attention_cap = 1;
  Fixture one(c);
  one.store.at("fuse.1.W").value = w;
  EXPECT_GT((run(one) - run(dense)).norm(), 1e-9);
}
