#pragma once

// Geo-weighted hyperbolic InfoNCE per level and its level-weighted total.

#include <array>
#include <random>
#include <vector>

#include "hierloc/autodiff.hpp"
#include "hierloc/dataset.hpp"
#include "hierloc/geodesy.hpp"
#include "hierloc/params.hpp"

namespace hierloc::training {

using ad::Matrix;
using ad::Var;

struct LossConfig {
  double tau = 0.1;
  double lambda = 1.0;  // 0 disables geo weighting (plain InfoNCE)
  double sigma = 0.1;   // haversine-angle units (radians)
  geo::KernelKind kernel = geo::KernelKind::Laplace;
  double kernel_p = 1.0;
  std::array<double, data::kLevels> beta = {1.0, 1.0, 1.0, 1.0};
  bool squared_distance = true;
  // tau, lambda, sigma trained through a softplus reparameterization.
  bool learn_scalars = true;
  // One (tau, lambda, sigma) set per level instead of a shared set.
  bool per_level_scalars = false;
  // > 0: each image sees this many uniformly sampled negatives per level.
  int negatives = 0;

  void validate() const;
};

class GwhLoss {
 public:
  // Registers the scalar parameters (when learnable) in `store`.
  GwhLoss(LossConfig cfg, ParameterStore& store);

  const LossConfig& config() const { return cfg_; }

  // Realized (tau, lambda, sigma) on the tape for one level.
  Var tau(const std::vector<Var>& leaves, int level) const;
  Var lambda(const std::vector<Var>& leaves, int level) const;
  Var sigma(const std::vector<Var>& leaves, int level) const;
  // Current realized values, read from the store.
  double tau_value(const ParameterStore& store, int level) const;
  double lambda_value(const ParameterStore& store, int level) const;
  double sigma_value(const ParameterStore& store, int level) const;

  // dist: b x n distances (squared or not, per config), positives per row,
  // angles: b x n haversine angles between image and entity coordinates.
  Var level_loss(const std::vector<Var>& leaves, int level, Var dist, const std::vector<int>& positives,
                 const Matrix& angles, std::mt19937_64& rng) const;

 private:
  double scalar_value(const ParameterStore& store, const std::array<std::size_t, data::kLevels>& idx, double fixed,
                      int level) const;

  LossConfig cfg_;
  bool learn_lambda_ = false;
  std::array<std::size_t, data::kLevels> tau_idx_{}, lambda_idx_{}, sigma_idx_{};
};

// sum_l beta_l * losses[l]; levels with beta == 0 are skipped and may be
// invalid Vars. Throws on a negative beta.
Var total_loss(const std::vector<Var>& losses, const std::array<double, data::kLevels>& beta);

// Haversine angles between each image and each entity: b x n.
Matrix angle_matrix(const std::vector<geo::GeoCoord>& images, const std::vector<geo::GeoCoord>& entities);

}  // namespace hierloc::training
