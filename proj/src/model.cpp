#include "hierloc/model.hpp"

#include <algorithm>
#include <cmath>

#include "hierloc/errors.hpp"

namespace hierloc::model {

Geometry parse_geometry(std::string_view s) {
  if (s == "hyperbolic") return Geometry::Hyperbolic;
  if (s == "euclidean" || s == "euclidean-ablation") return Geometry::Euclidean;
  throw ConfigError("unknown manifold '" + std::string(s) + "' (expected hyperbolic or euclidean)");
}

std::string_view geometry_name(Geometry g) { return g == Geometry::Hyperbolic ? "hyperbolic" : "euclidean"; }

AnchorMode parse_anchor_mode(std::string_view s) {
  if (s == "manifold") return AnchorMode::Manifold;
  if (s == "tangent") return AnchorMode::Tangent;
  throw ConfigError("unknown anchor mode '" + std::string(s) + "' (expected manifold or tangent)");
}

std::string_view anchor_mode_name(AnchorMode m) { return m == AnchorMode::Manifold ? "manifold" : "tangent"; }

void ModelConfig::validate() const {
  if (dim <= 0 || hidden <= 0 || heads <= 0) throw ConfigError("model: dim, hidden and heads must be positive");
  if (dim % heads != 0) throw ConfigError("model: dim must be divisible by heads");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("model: dropout must be in [0, 1)");
  if (!(curvature > 0.0) || !std::isfinite(curvature)) throw ConfigError("model: curvature must be positive");
  if (!(anchor_sigma >= 0.0)) throw ConfigError("model: anchor_sigma must be >= 0");
  if (!std::isfinite(alpha_init)) throw ConfigError("model: alpha_init must be finite");
  if (attention_cap < 0) throw ConfigError("model: attention_cap must be >= 0");
  if (loc_scales == 0) throw ConfigError("model: loc_scales must be positive");
}

Model::Model(ModelConfig cfg, const std::array<int, data::kLevels>& counts, std::size_t d_in, std::size_t d_img,
             ParameterStore& store, std::uint64_t seed)
    : cfg_(std::move(cfg)), d_img_(d_img) {
  cfg_.validate();
  if (d_in == 0 || d_img == 0) throw ContractViolation("model: input dimensions must be positive");
  std::mt19937_64 rng(seed);
  const Eigen::Index d = cfg_.dim, h = cfg_.hidden;
  auto linear = [&](const std::string& name, Eigen::Index in, Eigen::Index out, bool zero = false) {
    Linear l;
    l.w = store.add(name + ".W", zero ? Matrix::Zero(in, out) : fan_in_uniform(in, in, out, rng));
    l.b = store.add(name + ".b", zero ? Matrix::Zero(1, out) : fan_in_uniform(in, 1, out, rng));
    return l;
  };

  for (int l = 0; l < data::kLevels; ++l) {
    Matrix eps = gaussian(counts[l], d, cfg_.anchor_sigma, rng);
    const std::string name = std::string("entity.anchor.") + data::kLevelNames[l];
    if (cfg_.effective_anchor_mode() == AnchorMode::Manifold) {
      ad::Tape t;
      Matrix a = ad::exp_origin_rows(t.constant(eps), cfg_.curvature).value();
      anchor_[l] = store.add(name, std::move(a), ParamKind::Manifold);
    } else {
      anchor_[l] = store.add(name, std::move(eps));
    }
  }
  ent_mlp_[0] = linear("entity.mlp.0", static_cast<Eigen::Index>(d_in), h);
  ent_mlp_[1] = linear("entity.mlp.1", h, h);
  ent_mlp_[2] = linear("entity.mlp.2", h, h);
  ent_delta_ = linear("entity.delta", h, d);
  ent_alpha_ = store.add("entity.alpha", Matrix::Constant(1, 1, cfg_.alpha_init));

  img_mlp_[0] = linear("image.mlp.0", static_cast<Eigen::Index>(d_img), h);
  img_mlp_[1] = linear("image.mlp.1", h, h);
  img_head_ = linear("image.head", h, d);
  img_alpha_ = store.add("image.alpha", Matrix::Constant(1, 1, cfg_.alpha_init));

  for (int l = 0; l < data::kLevels; ++l) {
    const std::string base = std::string("attn.") + data::kLevelNames[l];
    attn_[l].q = linear(base + ".q", d, d);
    attn_[l].k = linear(base + ".k", d, d);
    attn_[l].v = linear(base + ".v", d, d);
    attn_[l].o = linear(base + ".o", d, d);
  }
  fuse_[0] = linear("fuse.0", 4 * d, h);
  fuse_[1] = linear("fuse.1", h, d, /*zero=*/true);
}

Var Model::linear(const std::vector<Var>& leaves, const Linear& l, Var x) const {
  return ad::add_row_broadcast(ad::matmul(x, leaves[l.w]), leaves[l.b]);
}

Var Model::to_tangent(Var points) const {
  return hyperbolic() ? ad::log_origin_rows(points, cfg_.curvature) : points;
}

Var Model::from_tangent(Var tangents) const {
  return hyperbolic() ? ad::exp_origin_rows(tangents, cfg_.curvature) : tangents;
}

EntityEmbedding Model::embed_entities(const std::vector<Var>& leaves,
                                      const std::array<Matrix, data::kLevels>& features, bool training,
                                      std::mt19937_64& rng) const {
  ad::Tape& tape = *leaves.at(0).tape;
  EntityEmbedding out;
  for (int l = 0; l < data::kLevels; ++l) {
    const Var anchor = leaves[anchor_[l]];
    if (features[l].rows() != anchor.rows()) throw ContractViolation("embed_entities: feature rows != entity count");
    Var x = tape.constant(features[l]);
    if (x.cols() != leaves[ent_mlp_[0].w].rows()) throw ContractViolation("embed_entities: feature dimension mismatch");
    x = ad::dropout(ad::gelu(linear(leaves, ent_mlp_[0], x)), cfg_.dropout, training, rng);
    x = ad::dropout(ad::gelu(linear(leaves, ent_mlp_[1], x)), cfg_.dropout, training, rng);
    x = linear(leaves, ent_mlp_[2], x);
    const Var delta = linear(leaves, ent_delta_, x);
    const Var base = cfg_.effective_anchor_mode() == AnchorMode::Manifold ? ad::log_origin_rows(anchor, cfg_.curvature)
                                                                           : anchor;
    const Var tangent = ad::add(base, ad::scale(delta, leaves[ent_alpha_]));
    out.points[l] = from_tangent(tangent);
    out.tangent_vars[l] = to_tangent(out.points[l]);
    out.tangents[l] = out.tangent_vars[l].value();
  }
  return out;
}

Var Model::embed_images(const std::vector<Var>& leaves, const Matrix& phi, bool training, std::mt19937_64& rng) const {
  if (phi.cols() != static_cast<Eigen::Index>(d_img_)) throw ContractViolation("embed_images: feature dimension mismatch");
  ad::Tape& tape = *leaves.at(0).tape;
  Var x = tape.constant(phi);
  x = ad::dropout(ad::gelu(linear(leaves, img_mlp_[0], x)), cfg_.dropout, training, rng);
  x = linear(leaves, img_mlp_[1], x);
  const Var delta = linear(leaves, img_head_, x);
  return from_tangent(ad::scale(delta, leaves[img_alpha_]));
}

Var Model::attention(const std::vector<Var>& leaves, int level, Var query, Var keys, const Matrix* mask) const {
  if (keys.rows() == 0) throw ContractViolation("attention: no entities at level");
  const Attn& a = attn_[level];
  const Var q = linear(leaves, a.q, query);
  const Var k = linear(leaves, a.k, keys);
  const Var v = linear(leaves, a.v, keys);
  const int heads = cfg_.heads;
  const Eigen::Index dh = cfg_.dim / heads;
  const double inv = 1.0 / std::sqrt(static_cast<double>(dh));
  std::vector<Var> ctx;
  ctx.reserve(heads);
  for (int h = 0; h < heads; ++h) {
    Var s = ad::mul_scalar(ad::matmul_bt(ad::slice_cols(q, h * dh, dh), ad::slice_cols(k, h * dh, dh)), inv);
    if (mask) s = ad::add(s, query.tape->constant(*mask));
    ctx.push_back(ad::matmul(ad::softmax_rows(s), ad::slice_cols(v, h * dh, dh)));
  }
  return linear(leaves, a.o, ad::concat_cols(ctx));
}

Matrix Model::attention_mask(const Matrix& queries, const Matrix& keys) const {
  const Eigen::Index b = queries.rows(), n = keys.rows(), cap = cfg_.attention_cap;
  Matrix mask = Matrix::Constant(b, n, -1e30);
  std::vector<std::pair<double, Eigen::Index>> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < b; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) order[j] = {(queries.row(i) - keys.row(j)).squaredNorm(), j};
    std::partial_sort(order.begin(), order.begin() + cap, order.end());
    for (Eigen::Index r = 0; r < cap; ++r) mask(i, order[r].second) = 0.0;
  }
  return mask;
}

Var Model::refine(const std::vector<Var>& leaves, Var z_img_points, const EntityEmbedding& ent) const {
  ad::Tape& tape = *z_img_points.tape;
  const Var z = to_tangent(z_img_points);
  std::vector<Var> contexts;
  for (int l = 0; l < data::kLevels; ++l) {
    const Var keys = cfg_.detach_entity_context ? tape.constant(ent.tangents[l]) : ent.tangent_vars[l];
    Matrix mask;
    const bool capped = cfg_.attention_cap > 0 && cfg_.attention_cap < keys.rows();
    if (capped) mask = attention_mask(z.value(), ent.tangents[l]);
    contexts.push_back(attention(leaves, l, z, keys, capped ? &mask : nullptr));
  }
  const Var fused = linear(leaves, fuse_[1], ad::gelu(linear(leaves, fuse_[0], ad::concat_cols(contexts))));
  return from_tangent(ad::add(z, fused));
}

Var Model::distances(Var queries, Var entities, bool squared) const {
  return hyperbolic() ? ad::lorentz_distance(queries, entities, cfg_.curvature, squared)
                      : ad::euclidean_distance(queries, entities, squared);
}

}  // namespace hierloc::model
