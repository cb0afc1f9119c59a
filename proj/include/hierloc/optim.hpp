#pragma once

// AdamW for Euclidean parameters, Riemannian Adam for hyperboloid points,
// global-norm gradient clipping.

#include <cstdint>
#include <map>
#include <vector>

#include "hierloc/autodiff.hpp"
#include "hierloc/params.hpp"

namespace hierloc::training {

using ad::Matrix;

struct AdamConfig {
  double lr = 2e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;  // AdamW only

  void validate() const;
};

struct Moments {
  Matrix m;
  Matrix v;
};

// One decoupled-weight-decay Adam update of x in place; `t` is the 1-based step.
void adamw_update(Matrix& x, const Matrix& g, Moments& s, std::int64_t t, const AdamConfig& cfg);

// One Riemannian Adam update of the hyperboloid points stored as rows of x
// (ambient coordinates), given the ambient Euclidean gradient g. Returns the
// number of rows whose pre-projection residual exceeded 1e-6. First moments
// are ambient tangent coefficients, not transported between steps; the second
// moment is one scalar per point (s.v is n x 1).
int riemannian_adam_update(Matrix& x, const Matrix& g, Moments& s, std::int64_t t, const AdamConfig& cfg,
                           double curvature);

class AdamW {
 public:
  explicit AdamW(AdamConfig cfg) : cfg_(cfg) { cfg_.validate(); }
  // Updates every store parameter listed in `indices` using grads[index].
  void step(ParameterStore& store, const std::vector<Matrix>& grads, const std::vector<std::size_t>& indices);
  std::int64_t steps() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  std::int64_t t_ = 0;
  std::map<std::size_t, Moments> state_;
};

class RiemannianAdam {
 public:
  RiemannianAdam(AdamConfig cfg, double curvature);
  void step(ParameterStore& store, const std::vector<Matrix>& grads, const std::vector<std::size_t>& indices);
  std::int64_t steps() const { return t_; }
  std::int64_t drift_warnings() const { return drift_warnings_; }

 private:
  AdamConfig cfg_;
  double k_;
  std::int64_t t_ = 0;
  std::int64_t drift_warnings_ = 0;
  std::map<std::size_t, Moments> state_;
};

double global_norm(const std::vector<Matrix>& grads);
// Scales all gradients by max_norm / ||g|| when ||g|| > max_norm. Returns the
// norm before clipping.
double clip_gradients(std::vector<Matrix>& grads, double max_norm);
// Throws std::runtime_error naming the first parameter with a non-finite gradient.
void check_finite(const ParameterStore& store, const std::vector<Matrix>& grads);

}  // namespace hierloc::training
