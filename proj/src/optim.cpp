#include "hierloc/optim.hpp"

#include <cmath>
#include <stdexcept>

#include "hierloc/errors.hpp"
#include "hierloc/manifold.hpp"

namespace hierloc::training {

void AdamConfig::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("optimizer: lr must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ConfigError("optimizer: betas must be in [0, 1)");
  }
  if (!(eps > 0.0)) throw ConfigError("optimizer: eps must be positive");
  if (!(weight_decay >= 0.0)) throw ConfigError("optimizer: weight_decay must be >= 0");
}

namespace {

void init_moments(Moments& s, const Matrix& like) {
  if (s.m.size() == 0) {
    s.m = Matrix::Zero(like.rows(), like.cols());
    s.v = Matrix::Zero(like.rows(), like.cols());
  }
}

// Bias-corrected Adam direction for gradient g (moments updated in place).
Matrix adam_direction(const Matrix& g, Moments& s, std::int64_t t, const AdamConfig& cfg) {
  s.m = cfg.beta1 * s.m + (1.0 - cfg.beta1) * g;
  s.v = cfg.beta2 * s.v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  return (s.m / c1).array() / ((s.v / c2).array().sqrt() + cfg.eps);
}

}  // namespace

void adamw_update(Matrix& x, const Matrix& g, Moments& s, std::int64_t t, const AdamConfig& cfg) {
  if (g.rows() != x.rows() || g.cols() != x.cols()) throw ContractViolation("adam: gradient shape mismatch");
  init_moments(s, x);
  const Matrix dir = adam_direction(g, s, t, cfg);
  x -= cfg.lr * cfg.weight_decay * x;
  x -= cfg.lr * dir;
}

int riemannian_adam_update(Matrix& x, const Matrix& g, Moments& s, std::int64_t t, const AdamConfig& cfg,
                           double curvature) {
  if (g.rows() != x.rows() || g.cols() != x.cols()) throw ContractViolation("riemannian adam: gradient shape mismatch");
  if (x.cols() < 2) throw ContractViolation("riemannian adam: points need at least 2 ambient coordinates");
  if (s.m.size() == 0) {
    s.m = Matrix::Zero(x.rows(), x.cols());
    s.v = Matrix::Zero(x.rows(), 1);
  }
  const manifold::Curvature c(curvature);
  const double r = c.radius();
  // Riemannian gradient: Minkowski-raise (flip time sign), then project to T_p.
  Matrix rg = g;
  rg.col(0) *= -1.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double ip = manifold::lorentz_inner(x.row(i).transpose(), rg.row(i).transpose());
    rg.row(i) += (ip / curvature) * x.row(i);
  }
  // One second moment per point: the squared Riemannian norm of its gradient.
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  s.m = cfg.beta1 * s.m + (1.0 - cfg.beta1) * rg;
  Matrix dir(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double sq = std::max(0.0, manifold::lorentz_inner(rg.row(i).transpose(), rg.row(i).transpose()));
    s.v(i, 0) = cfg.beta2 * s.v(i, 0) + (1.0 - cfg.beta2) * sq;
    dir.row(i) = (s.m.row(i) / c1) / (std::sqrt(s.v(i, 0) / c2) + cfg.eps);
  }
  int drifted = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (dir.row(i).isZero(0.0)) continue;
    const Eigen::VectorXd p = x.row(i).transpose();
    Eigen::VectorXd v = dir.row(i).transpose();
    v += (manifold::lorentz_inner(p, v) / curvature) * p;
    v *= -cfg.lr;
    const double n = std::sqrt(std::max(0.0, manifold::lorentz_inner(v, v)));
    const double tt = n / r;
    Eigen::VectorXd q = std::cosh(tt) * p + manifold::raw::sinhc(tt) * v;
    if (manifold::constraint_residual(q, c) > 1e-6) ++drifted;
    x.row(i) = manifold::project_to_hyperboloid(q.tail(q.size() - 1), c).coords().transpose();
  }
  return drifted;
}

void AdamW::step(ParameterStore& store, const std::vector<Matrix>& grads, const std::vector<std::size_t>& indices) {
  ++t_;
  for (std::size_t i : indices) {
    if (!grads.at(i).allFinite()) throw std::runtime_error("non-finite gradient for parameter " + store[i].name);
  }
  for (std::size_t i : indices) adamw_update(store[i].value, grads.at(i), state_[i], t_, cfg_);
}

RiemannianAdam::RiemannianAdam(AdamConfig cfg, double curvature) : cfg_(cfg), k_(curvature) {
  cfg_.validate();
  manifold::Curvature check(curvature);
  (void)check;
}

void RiemannianAdam::step(ParameterStore& store, const std::vector<Matrix>& grads,
                          const std::vector<std::size_t>& indices) {
  ++t_;
  for (std::size_t i : indices) {
    if (!grads.at(i).allFinite()) throw std::runtime_error("non-finite gradient for parameter " + store[i].name);
  }
  for (std::size_t i : indices) {
    drift_warnings_ += riemannian_adam_update(store[i].value, grads.at(i), state_[i], t_, cfg_, k_);
  }
}

double global_norm(const std::vector<Matrix>& grads) {
  double s = 0.0;
  for (const auto& g : grads) s += g.squaredNorm();
  return std::sqrt(s);
}

double clip_gradients(std::vector<Matrix>& grads, double max_norm) {
  if (!(max_norm > 0.0)) throw ContractViolation("clip_gradients: max_norm must be positive");
  const double n = global_norm(grads);
  if (n > max_norm) {
    const double f = max_norm / n;
    for (auto& g : grads) g *= f;
  }
  return n;
}

void check_finite(const ParameterStore& store, const std::vector<Matrix>& grads) {
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!grads[i].allFinite()) throw std::runtime_error("non-finite gradient for parameter " + store[i].name);
  }
}

}  // namespace hierloc::training
