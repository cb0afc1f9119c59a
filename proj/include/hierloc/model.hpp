#pragma once

// Entity embedder, image embedder and per-level cross-modal attention with
// fusion, expressed as tape computations over a ParameterStore.

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "hierloc/autodiff.hpp"
#include "hierloc/dataset.hpp"
#include "hierloc/params.hpp"

namespace hierloc::model {

using ad::Matrix;
using ad::Var;

enum class Geometry { Hyperbolic, Euclidean };
// Tangent: anchors are tangent vectors eps at the origin, updated by AdamW.
// Manifold: anchors are ambient points A = exp_origin(eps), updated by
// Riemannian Adam. Euclidean geometry always uses tangent anchors.
enum class AnchorMode { Tangent, Manifold };

Geometry parse_geometry(std::string_view s);
std::string_view geometry_name(Geometry g);
AnchorMode parse_anchor_mode(std::string_view s);
std::string_view anchor_mode_name(AnchorMode m);

struct ModelConfig {
  int dim = 128;
  int hidden = 256;
  int heads = 8;
  double dropout = 0.1;
  double alpha_init = 0.1;
  double anchor_sigma = 0.02;
  double curvature = 0.8;
  Geometry geometry = Geometry::Hyperbolic;
  AnchorMode anchor_mode = AnchorMode::Manifold;
  // Entity tangents enter attention as constants.
  bool detach_entity_context = true;
  // > 0: each image attends only to its `attention_cap` nearest entities per level.
  int attention_cap = 0;
  std::size_t loc_scales = 16;

  void validate() const;
  AnchorMode effective_anchor_mode() const {
    return geometry == Geometry::Euclidean ? AnchorMode::Tangent : anchor_mode;
  }
};

// Per-level tape outputs for the entities.
struct EntityEmbedding {
  std::array<Var, data::kLevels> points;    // n x (d+1) hyperbolic, n x d Euclidean
  std::array<Matrix, data::kLevels> tangents;  // log_origin values (attention keys/values)
  std::array<Var, data::kLevels> tangent_vars;  // same, on tape (used when not detached)
};

class Model {
 public:
  Model(ModelConfig cfg, const std::array<int, data::kLevels>& entity_counts, std::size_t d_entity_in,
        std::size_t d_img, ParameterStore& store, std::uint64_t seed);

  const ModelConfig& config() const { return cfg_; }
  double curvature() const { return cfg_.curvature; }
  bool hyperbolic() const { return cfg_.geometry == Geometry::Hyperbolic; }

  EntityEmbedding embed_entities(const std::vector<Var>& leaves, const std::array<Matrix, data::kLevels>& features,
                                 bool training, std::mt19937_64& rng) const;
  // phi: b x d_img -> Z_img points (b x (d+1)) or Euclidean b x d.
  Var embed_images(const std::vector<Var>& leaves, const Matrix& phi, bool training, std::mt19937_64& rng) const;
  // Multi-head attention of queries (b x d) over entity keys/values (n x d).
  Var attention(const std::vector<Var>& leaves, int level, Var query, Var keys, const Matrix* mask) const;
  // Refined image points from Z_img and the entity context.
  Var refine(const std::vector<Var>& leaves, Var z_img_points, const EntityEmbedding& ent) const;
  // Pairwise distances b x n between refined images and entity points.
  Var distances(Var queries, Var entities, bool squared) const;

  // Tangent coordinates at the origin of a row-point matrix (identity in Euclidean mode).
  Var to_tangent(Var points) const;
  Var from_tangent(Var tangents) const;

 private:
  struct Linear {
    std::size_t w = 0, b = 0;
  };
  Var linear(const std::vector<Var>& leaves, const Linear& l, Var x) const;
  Matrix attention_mask(const Matrix& queries_tangent, const Matrix& keys) const;

  ModelConfig cfg_;
  std::size_t d_img_;
  std::array<std::size_t, data::kLevels> anchor_{};
  std::array<Linear, 3> ent_mlp_;
  Linear ent_delta_;
  std::size_t ent_alpha_ = 0;
  std::array<Linear, 2> img_mlp_;
  Linear img_head_;
  std::size_t img_alpha_ = 0;
  struct Attn {
    Linear q, k, v, o;
  };
  std::array<Attn, data::kLevels> attn_;
  std::array<Linear, 2> fuse_;
};

}  // namespace hierloc::model
