#pragma once

// Minimal reverse-mode automatic differentiation over dense matrices.
//
// Every node holds an Eigen matrix. Points on the hyperboloid are rows of
// ambient coordinates (time first); tangent vectors at the origin are rows of
// spatial coordinates. Nodes are appended in topological order, so backward
// is a single reverse sweep.

#include <deque>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "hierloc/geodesy.hpp"

namespace hierloc::ad {

using Matrix = Eigen::MatrixXd;

class Tape;

struct Var {
  Tape* tape = nullptr;
  int id = -1;

  const Matrix& value() const;
  const Matrix& grad() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  double scalar() const { return value()(0, 0); }
};

class Tape {
 public:
  using Backward = std::function<void(Tape&, const Matrix& out_grad)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaf without gradient.
  Var constant(Matrix v);
  // Leaf that receives a gradient.
  Var leaf(Matrix v);
  // Interior node. `parents` that require grad make this node require grad;
  // the backward closure runs only when it does.
  Var push(Matrix v, std::initializer_list<Var> parents, Backward back);
  Var push(Matrix v, const std::vector<Var>& parents, Backward back);

  const Matrix& value(int id) const { return nodes_[id].value; }
  // Zero matrix of the right shape when no gradient reached the node.
  const Matrix& grad(int id) const;
  bool requires_grad(int id) const { return nodes_[id].requires_grad; }

  // Accumulates `g` into the gradient of node `id` if it requires grad.
  void accumulate(int id, const Matrix& g);

  // Seeds d(out)/d(out) = 1 for a 1x1 node.
  void backward(Var out);
  void backward(Var out, const Matrix& seed);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    bool has_grad = false;
    Backward back;
  };
  std::deque<Node> nodes_;
  mutable Matrix zero_;
};

// ---- elementwise and linear ops ----
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);                // elementwise, same shape
Var add_row_broadcast(Var a, Var b);  // a: n x m, b: 1 x m
Var mul_scalar(Var a, double s);
Var scale(Var a, Var s);              // s: 1 x 1
Var matmul(Var a, Var b);
Var matmul_bt(Var a, Var b);          // a * b^T
Var concat_cols(const std::vector<Var>& parts);
Var slice_cols(Var a, Eigen::Index start, Eigen::Index len);
Var gather_rows(Var a, const std::vector<int>& rows);
Var sum(Var a);                       // 1 x 1
Var mean(Var a);                      // 1 x 1
Var square(Var a);
Var exp(Var a);
Var log(Var a);
Var cosh(Var a);
Var sinh(Var a);
// arcosh(max(1, u)); derivative 0 where u <= 1 + 1e-12.
Var arcosh(Var a);
Var softplus(Var a);
Var gelu(Var a);                      // exact erf form
// Inverted dropout with a seeded mask; identity when !training or p == 0.
Var dropout(Var a, double p, bool training, std::mt19937_64& rng);
Var softmax_rows(Var a);
Var row_norm(Var a);                  // n x 1 Euclidean norms; subgradient 0 at 0

// ---- Lorentz ops (curvature parameter K) ----
Var lorentz_inner_rows(Var x, Var y);                 // n x 1, row pairs
Var exp_origin_rows(Var v, double k);                 // n x d -> n x (d+1)
Var log_origin_rows(Var x, double k);                 // n x (d+1) -> n x d
// Pairwise distances between rows of q (b x D) and p (m x D): b x m.
Var lorentz_distance(Var q, Var p, double k, bool squared);
Var euclidean_distance(Var q, Var p, bool squared);

// w = 1 + lambda * kernel(g; sigma), g a constant matrix of haversine angles.
// lambda, sigma: 1 x 1.
Var geo_kernel_weights(const Matrix& g, Var lambda, Var sigma, geo::KernelKind kind, double p);

// Mean over rows of the weighted InfoNCE loss. Row i has positive column
// pos[i]; every other column j with mask(i,j) != 0 is a negative whose
// exponential is scaled by weights(i,j). dist: b x m, weights: b x m
// (constant or Var), tau: 1 x 1.
Var weighted_infonce(Var dist, const std::vector<int>& pos, Var weights, Var tau, const Matrix* mask = nullptr);

// Scalar helpers.
double sinhc(double t);
double gelu_value(double x);
double softplus_value(double x);
double softplus_inverse(double y);

}  // namespace hierloc::ad
