#include "hierloc/loss.hpp"

#include <algorithm>
#include <cmath>

#include "hierloc/errors.hpp"

namespace hierloc::training {

void LossConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("loss: tau must be positive");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("loss: lambda must be >= 0");
  geo::KernelConfig{kernel, sigma, kernel_p}.validate();
  for (double b : beta) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw ConfigError("loss: beta weights must be >= 0");
  }
  if (negatives < 0) throw ConfigError("loss: negatives must be >= 0");
}

GwhLoss::GwhLoss(LossConfig cfg, ParameterStore& store) : cfg_(std::move(cfg)) {
  cfg_.validate();
  learn_lambda_ = cfg_.learn_scalars && cfg_.lambda > 0.0;
  if (!cfg_.learn_scalars) return;
  auto reg = [&](const char* what, double init, std::array<std::size_t, data::kLevels>& idx) {
    if (cfg_.per_level_scalars) {
      for (int l = 0; l < data::kLevels; ++l) {
        idx[l] = store.add(std::string("loss.") + what + "_raw." + data::kLevelNames[l],
                           Matrix::Constant(1, 1, ad::softplus_inverse(init)));
      }
    } else {
      const std::size_t i = store.add(std::string("loss.") + what + "_raw",
                                      Matrix::Constant(1, 1, ad::softplus_inverse(init)));
      idx.fill(i);
    }
  };
  reg("tau", cfg_.tau, tau_idx_);
  if (learn_lambda_) reg("lambda", cfg_.lambda, lambda_idx_);
  reg("sigma", cfg_.sigma, sigma_idx_);
}

Var GwhLoss::tau(const std::vector<Var>& leaves, int level) const {
  if (!cfg_.learn_scalars) return leaves.at(0).tape->constant(Matrix::Constant(1, 1, cfg_.tau));
  return ad::softplus(leaves[tau_idx_[level]]);
}

Var GwhLoss::lambda(const std::vector<Var>& leaves, int level) const {
  if (!learn_lambda_) return leaves.at(0).tape->constant(Matrix::Constant(1, 1, cfg_.lambda));
  return ad::softplus(leaves[lambda_idx_[level]]);
}

Var GwhLoss::sigma(const std::vector<Var>& leaves, int level) const {
  if (!cfg_.learn_scalars) return leaves.at(0).tape->constant(Matrix::Constant(1, 1, cfg_.sigma));
  return ad::softplus(leaves[sigma_idx_[level]]);
}

double GwhLoss::scalar_value(const ParameterStore& store, const std::array<std::size_t, data::kLevels>& idx,
                             double fixed, int level) const {
  return cfg_.learn_scalars ? ad::softplus_value(store[idx[level]].value(0, 0)) : fixed;
}

double GwhLoss::tau_value(const ParameterStore& store, int level) const {
  return scalar_value(store, tau_idx_, cfg_.tau, level);
}

double GwhLoss::lambda_value(const ParameterStore& store, int level) const {
  return learn_lambda_ ? ad::softplus_value(store[lambda_idx_[level]].value(0, 0)) : cfg_.lambda;
}

double GwhLoss::sigma_value(const ParameterStore& store, int level) const {
  return scalar_value(store, sigma_idx_, cfg_.sigma, level);
}

Var GwhLoss::level_loss(const std::vector<Var>& leaves, int level, Var dist, const std::vector<int>& positives,
                        const Matrix& angles, std::mt19937_64& rng) const {
  ad::Tape& tape = *dist.tape;
  if (dist.cols() < 2) throw ContractViolation("gwh_infonce: a level needs at least one negative");
  if (angles.rows() != dist.rows() || angles.cols() != dist.cols()) {
    throw ContractViolation("gwh_infonce: angle matrix shape mismatch");
  }
  Var weights = cfg_.lambda == 0.0
                    ? tape.constant(Matrix::Ones(dist.rows(), dist.cols()))
                    : ad::geo_kernel_weights(angles, lambda(leaves, level), sigma(leaves, level), cfg_.kernel,
                                             cfg_.kernel_p);
  Matrix mask;
  const Eigen::Index n = dist.cols();
  const bool sample = cfg_.negatives > 0 && cfg_.negatives < n - 1;
  if (sample) {
    mask = Matrix::Zero(dist.rows(), n);
    std::vector<int> pool;
    for (Eigen::Index i = 0; i < dist.rows(); ++i) {
      pool.clear();
      for (int j = 0; j < n; ++j) {
        if (j != positives[i]) pool.push_back(j);
      }
      std::shuffle(pool.begin(), pool.end(), rng);
      for (int r = 0; r < cfg_.negatives; ++r) mask(i, pool[r]) = 1.0;
    }
  }
  return ad::weighted_infonce(dist, positives, weights, tau(leaves, level), sample ? &mask : nullptr);
}

Var total_loss(const std::vector<Var>& losses, const std::array<double, data::kLevels>& beta) {
  if (losses.size() != data::kLevels) throw ContractViolation("total_loss: expected one loss per level");
  Var total;
  for (int l = 0; l < data::kLevels; ++l) {
    if (beta[l] < 0.0) throw ContractViolation("total_loss: negative beta");
    if (beta[l] == 0.0) continue;
    if (losses[l].tape == nullptr) throw ContractViolation("total_loss: missing loss for a weighted level");
    const Var term = beta[l] == 1.0 ? losses[l] : ad::mul_scalar(losses[l], beta[l]);
    total = total.tape == nullptr ? term : ad::add(total, term);
  }
  if (total.tape == nullptr) throw ContractViolation("total_loss: all beta weights are zero");
  return total;
}

Matrix angle_matrix(const std::vector<geo::GeoCoord>& images, const std::vector<geo::GeoCoord>& entities) {
  Matrix g(static_cast<Eigen::Index>(images.size()), static_cast<Eigen::Index>(entities.size()));
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = 0; j < entities.size(); ++j) {
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = geo::haversine_angle(images[i], entities[j]);
    }
  }
  return g;
}

}  // namespace hierloc::training
