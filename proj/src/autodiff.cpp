#include "hierloc/autodiff.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hierloc/errors.hpp"
#include "hierloc/kernels.hpp"
#include "hierloc/manifold.hpp"

namespace hierloc::ad {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ContractViolation(what);
}

void same_shape(const Var& a, const Var& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ContractViolation(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  }
}

// Flips the sign of column 0 (the Minkowski metric applied to rows).
Matrix flip_time(Matrix m) {
  m.col(0) *= -1.0;
  return m;
}

// (t cosh t - sinh t) / t^3
double sinhc_slope(double t) {
  if (t < 5e-3) {
    const double t2 = t * t;
    return 1.0 / 3.0 + t2 / 30.0 + t2 * t2 / 840.0;
  }
  return (t * std::cosh(t) - std::sinh(t)) / (t * t * t);
}

// asinh(s) / s
double asinhc(double s) { return s == 0.0 ? 1.0 : std::asinh(s) / s; }

// (s / sqrt(1 + s^2) - asinh s) / s^3
double asinhc_slope(double s) {
  if (s < 5e-3) {
    const double s2 = s * s;
    return -1.0 / 3.0 + 0.3 * s2 - 15.0 / 56.0 * s2 * s2;
  }
  return (s / std::sqrt(1.0 + s * s) - std::asinh(s)) / (s * s * s);
}

constexpr double kArcoshGradFloor = 1e-12;

}  // namespace

double sinhc(double t) { return manifold::raw::sinhc(t); }

double gelu_value(double x) { return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2)); }

double softplus_value(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double softplus_inverse(double y) {
  if (!(y > 0.0)) throw ContractViolation("softplus_inverse: argument must be positive");
  return y > 30.0 ? y + std::log(-std::expm1(-y)) : std::log(std::expm1(y));
}

// ---------------------------------------------------------------- Tape

const Matrix& Var::value() const { return tape->value(id); }
const Matrix& Var::grad() const { return tape->grad(id); }

Var Tape::constant(Matrix v) {
  nodes_.push_back(Node{std::move(v), {}, false, false, {}});
  return {this, static_cast<int>(nodes_.size()) - 1};
}

Var Tape::leaf(Matrix v) {
  nodes_.push_back(Node{std::move(v), {}, true, false, {}});
  return {this, static_cast<int>(nodes_.size()) - 1};
}

Var Tape::push(Matrix v, std::initializer_list<Var> parents, Backward back) {
  return push(std::move(v), std::vector<Var>(parents), std::move(back));
}

Var Tape::push(Matrix v, const std::vector<Var>& parents, Backward back) {
  bool rg = false;
  for (const auto& p : parents) {
    if (p.tape != this) throw ContractViolation("autodiff: operand belongs to a different tape");
    rg = rg || nodes_[p.id].requires_grad;
  }
  nodes_.push_back(Node{std::move(v), {}, rg, false, rg ? std::move(back) : Backward{}});
  return {this, static_cast<int>(nodes_.size()) - 1};
}

const Matrix& Tape::grad(int id) const {
  const Node& n = nodes_[id];
  if (n.has_grad) return n.grad;
  zero_ = Matrix::Zero(n.value.rows(), n.value.cols());
  return zero_;
}

void Tape::accumulate(int id, const Matrix& g) {
  Node& n = nodes_[id];
  if (!n.requires_grad) return;
  if (g.rows() != n.value.rows() || g.cols() != n.value.cols()) {
    throw std::logic_error("autodiff: gradient shape mismatch at node " + std::to_string(id));
  }
  if (n.has_grad) {
    n.grad += g;
  } else {
    n.grad = g;
    n.has_grad = true;
  }
}

void Tape::backward(Var out) {
  if (out.rows() != 1 || out.cols() != 1) throw ContractViolation("backward: output must be a scalar node");
  backward(out, Matrix::Ones(1, 1));
}

void Tape::backward(Var out, const Matrix& seed) {
  if (out.tape != this) throw ContractViolation("backward: node belongs to a different tape");
  accumulate(out.id, seed);
  for (int i = out.id; i >= 0; --i) {
    Node& n = nodes_[i];
    if (!n.has_grad || !n.back) continue;
    const Matrix g = n.grad;
    n.back(*this, g);
  }
}

// ---------------------------------------------------------------- linear ops

Var add(Var a, Var b) {
  same_shape(a, b, "add");
  return a.tape->push(a.value() + b.value(), {a, b}, [a, b](Tape& t, const Matrix& g) {
    t.accumulate(a.id, g);
    t.accumulate(b.id, g);
  });
}

Var sub(Var a, Var b) {
  same_shape(a, b, "sub");
  return a.tape->push(a.value() - b.value(), {a, b}, [a, b](Tape& t, const Matrix& g) {
    t.accumulate(a.id, g);
    t.accumulate(b.id, -g);
  });
}

Var mul(Var a, Var b) {
  same_shape(a, b, "mul");
  return a.tape->push(a.value().cwiseProduct(b.value()), {a, b}, [a, b](Tape& t, const Matrix& g) {
    t.accumulate(a.id, g.cwiseProduct(t.value(b.id)));
    t.accumulate(b.id, g.cwiseProduct(t.value(a.id)));
  });
}

Var add_row_broadcast(Var a, Var b) {
  require(b.rows() == 1 && b.cols() == a.cols(), "add_row_broadcast: bias must be 1 x cols");
  Matrix v = a.value().rowwise() + b.value().row(0);
  return a.tape->push(std::move(v), {a, b}, [a, b](Tape& t, const Matrix& g) {
    t.accumulate(a.id, g);
    t.accumulate(b.id, g.colwise().sum());
  });
}

Var mul_scalar(Var a, double s) {
  return a.tape->push(a.value() * s, {a}, [a, s](Tape& t, const Matrix& g) { t.accumulate(a.id, g * s); });
}

Var scale(Var a, Var s) {
  require(s.rows() == 1 && s.cols() == 1, "scale: factor must be 1 x 1");
  return a.tape->push(a.value() * s.scalar(), {a, s}, [a, s](Tape& t, const Matrix& g) {
    t.accumulate(a.id, g * t.value(s.id)(0, 0));
    t.accumulate(s.id, Matrix::Constant(1, 1, g.cwiseProduct(t.value(a.id)).sum()));
  });
}

Var matmul(Var a, Var b) {
  require(a.cols() == b.rows(), "matmul: inner dimensions differ");
  return a.tape->push(a.value() * b.value(), {a, b}, [a, b](Tape& t, const Matrix& g) {
    if (t.requires_grad(a.id)) t.accumulate(a.id, g * t.value(b.id).transpose());
    if (t.requires_grad(b.id)) t.accumulate(b.id, t.value(a.id).transpose() * g);
  });
}

Var matmul_bt(Var a, Var b) {
  require(a.cols() == b.cols(), "matmul_bt: column counts differ");
  return a.tape->push(a.value() * b.value().transpose(), {a, b}, [a, b](Tape& t, const Matrix& g) {
    if (t.requires_grad(a.id)) t.accumulate(a.id, g * t.value(b.id));
    if (t.requires_grad(b.id)) t.accumulate(b.id, g.transpose() * t.value(a.id));
  });
}

Var concat_cols(const std::vector<Var>& parts) {
  require(!parts.empty(), "concat_cols: no operands");
  const Eigen::Index rows = parts[0].rows();
  Eigen::Index cols = 0;
  for (const auto& p : parts) {
    require(p.rows() == rows, "concat_cols: row counts differ");
    cols += p.cols();
  }
  Matrix v(rows, cols);
  Eigen::Index off = 0;
  for (const auto& p : parts) {
    v.middleCols(off, p.cols()) = p.value();
    off += p.cols();
  }
  return parts[0].tape->push(std::move(v), parts, [parts](Tape& t, const Matrix& g) {
    Eigen::Index o = 0;
    for (const auto& p : parts) {
      const Eigen::Index c = t.value(p.id).cols();
      t.accumulate(p.id, g.middleCols(o, c));
      o += c;
    }
  });
}

Var slice_cols(Var a, Eigen::Index start, Eigen::Index len) {
  require(start >= 0 && len >= 0 && start + len <= a.cols(), "slice_cols: range out of bounds");
  return a.tape->push(a.value().middleCols(start, len), {a}, [a, start, len](Tape& t, const Matrix& g) {
    Matrix full = Matrix::Zero(t.value(a.id).rows(), t.value(a.id).cols());
    full.middleCols(start, len) = g;
    t.accumulate(a.id, full);
  });
}

Var gather_rows(Var a, const std::vector<int>& rows) {
  Matrix v(static_cast<Eigen::Index>(rows.size()), a.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i] >= 0 && rows[i] < a.rows(), "gather_rows: index out of range");
    v.row(static_cast<Eigen::Index>(i)) = a.value().row(rows[i]);
  }
  return a.tape->push(std::move(v), {a}, [a, rows](Tape& t, const Matrix& g) {
    Matrix full = Matrix::Zero(t.value(a.id).rows(), t.value(a.id).cols());
    for (std::size_t i = 0; i < rows.size(); ++i) full.row(rows[i]) += g.row(static_cast<Eigen::Index>(i));
    t.accumulate(a.id, full);
  });
}

Var sum(Var a) {
  return a.tape->push(Matrix::Constant(1, 1, a.value().sum()), {a}, [a](Tape& t, const Matrix& g) {
    t.accumulate(a.id, Matrix::Constant(t.value(a.id).rows(), t.value(a.id).cols(), g(0, 0)));
  });
}

Var mean(Var a) {
  require(a.value().size() > 0, "mean: empty operand");
  const double n = static_cast<double>(a.value().size());
  return a.tape->push(Matrix::Constant(1, 1, a.value().sum() / n), {a}, [a, n](Tape& t, const Matrix& g) {
    t.accumulate(a.id, Matrix::Constant(t.value(a.id).rows(), t.value(a.id).cols(), g(0, 0) / n));
  });
}

// ---------------------------------------------------------------- elementwise

namespace {

template <typename F, typename D>
Var unary(Var a, F f, D df) {
  Matrix v = a.value().unaryExpr(f);
  return a.tape->push(std::move(v), {a}, [a, df](Tape& t, const Matrix& g) {
    t.accumulate(a.id, g.cwiseProduct(t.value(a.id).unaryExpr(df)));
  });
}

}  // namespace

Var square(Var a) {
  return unary(a, [](double x) { return x * x; }, [](double x) { return 2.0 * x; });
}

Var exp(Var a) {
  return unary(a, [](double x) { return std::exp(x); }, [](double x) { return std::exp(x); });
}

Var log(Var a) {
  return unary(a, [](double x) { return std::log(x); }, [](double x) { return 1.0 / x; });
}

Var cosh(Var a) {
  return unary(a, [](double x) { return std::cosh(x); }, [](double x) { return std::sinh(x); });
}

Var sinh(Var a) {
  return unary(a, [](double x) { return std::sinh(x); }, [](double x) { return std::cosh(x); });
}

Var arcosh(Var a) {
  return unary(
      a, [](double u) { return manifold::raw::clamped_arcosh(u); },
      [](double u) { return u <= 1.0 + kArcoshGradFloor ? 0.0 : 1.0 / std::sqrt(u * u - 1.0); });
}

Var softplus(Var a) {
  return unary(a, softplus_value, [](double x) { return 1.0 / (1.0 + std::exp(-x)); });
}

Var gelu(Var a) {
  return unary(a, gelu_value, [](double x) {
    const double cdf = 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2));
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    return cdf + x * pdf;
  });
}

Var dropout(Var a, double p, bool training, std::mt19937_64& rng) {
  require(p >= 0.0 && p < 1.0, "dropout: probability must be in [0, 1)");
  if (!training || p == 0.0) return a;
  std::bernoulli_distribution keep(1.0 - p);
  Matrix mask(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < mask.cols(); ++j) {
    for (Eigen::Index i = 0; i < mask.rows(); ++i) mask(i, j) = keep(rng) ? 1.0 / (1.0 - p) : 0.0;
  }
  Matrix v = a.value().cwiseProduct(mask);
  return a.tape->push(std::move(v), {a}, [a, mask](Tape& t, const Matrix& g) {
    t.accumulate(a.id, g.cwiseProduct(mask));
  });
}

Var softmax_rows(Var a) {
  Matrix v = a.value();
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    const double m = v.row(i).maxCoeff();
    v.row(i) = (v.row(i).array() - m).exp();
    v.row(i) /= v.row(i).sum();
  }
  Var out = a.tape->push(v, {a}, [a, v](Tape& t, const Matrix& g) {
    const Eigen::VectorXd dot = g.cwiseProduct(v).rowwise().sum();
    Matrix d = g;
    d.colwise() -= dot;
    t.accumulate(a.id, d.cwiseProduct(v));
  });
  return out;
}

Var row_norm(Var a) {
  Matrix n = a.value().rowwise().norm();
  return a.tape->push(n, {a}, [a, n](Tape& t, const Matrix& g) {
    Matrix d = t.value(a.id);
    for (Eigen::Index i = 0; i < d.rows(); ++i) d.row(i) *= n(i, 0) > 0.0 ? g(i, 0) / n(i, 0) : 0.0;
    t.accumulate(a.id, d);
  });
}

// ---------------------------------------------------------------- Lorentz

Var lorentz_inner_rows(Var x, Var y) {
  same_shape(x, y, "lorentz_inner_rows");
  require(x.cols() >= 2, "lorentz_inner_rows: need at least 2 columns");
  Matrix v = flip_time(x.value()).cwiseProduct(y.value()).rowwise().sum();
  return x.tape->push(std::move(v), {x, y}, [x, y](Tape& t, const Matrix& g) {
    const Eigen::VectorXd gv = g.col(0);
    if (t.requires_grad(x.id)) t.accumulate(x.id, flip_time(t.value(y.id)).array().colwise() * gv.array());
    if (t.requires_grad(y.id)) t.accumulate(y.id, flip_time(t.value(x.id)).array().colwise() * gv.array());
  });
}

Var exp_origin_rows(Var v, double k) {
  require(k > 0.0, "exp_origin_rows: curvature must be positive");
  require(v.cols() >= 1, "exp_origin_rows: empty tangent");
  const double r = std::sqrt(k);
  const Matrix& vv = v.value();
  Matrix out(vv.rows(), vv.cols() + 1);
  for (Eigen::Index i = 0; i < vv.rows(); ++i) {
    const double t = vv.row(i).norm() / r;
    out(i, 0) = r * std::cosh(t);
    out.row(i).tail(vv.cols()) = sinhc(t) * vv.row(i);
  }
  return v.tape->push(std::move(out), {v}, [v, k, r](Tape& t, const Matrix& g) {
    const Matrix& x = t.value(v.id);
    Matrix d(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double tt = x.row(i).norm() / r;
      const double sc = sinhc(tt);
      const auto gs = g.row(i).tail(x.cols());
      d.row(i) = g(i, 0) * sc / r * x.row(i) + sc * gs + gs.dot(x.row(i)) * sinhc_slope(tt) / k * x.row(i);
    }
    t.accumulate(v.id, d);
  });
}

Var log_origin_rows(Var x, double k) {
  require(k > 0.0, "log_origin_rows: curvature must be positive");
  require(x.cols() >= 2, "log_origin_rows: need at least 2 columns");
  const double r = std::sqrt(k);
  const Matrix& xv = x.value();
  const Eigen::Index d = xv.cols() - 1;
  Matrix out(xv.rows(), d);
  for (Eigen::Index i = 0; i < xv.rows(); ++i) {
    const auto xs = xv.row(i).tail(d);
    out.row(i) = asinhc(xs.norm() / r) * xs;
  }
  return x.tape->push(std::move(out), {x}, [x, k, r, d](Tape& t, const Matrix& g) {
    const Matrix& xv2 = t.value(x.id);
    Matrix dx = Matrix::Zero(xv2.rows(), xv2.cols());
    for (Eigen::Index i = 0; i < xv2.rows(); ++i) {
      const auto xs = xv2.row(i).tail(d);
      const double s = xs.norm() / r;
      dx.row(i).tail(d) = asinhc(s) * g.row(i) + g.row(i).dot(xs) * asinhc_slope(s) / k * xs;
    }
    t.accumulate(x.id, dx);
  });
}

Var lorentz_distance(Var q, Var p, double k, bool squared) {
  require(q.cols() == p.cols() && q.cols() >= 2, "lorentz_distance: ambient dimensions differ");
  require(k > 0.0, "lorentz_distance: curvature must be positive");
  const Matrix u = -kernels::lorentz_inner_pairwise(q.value(), p.value()) / k;
  Matrix out = u.unaryExpr([squared](double x) {
    const double d = manifold::raw::clamped_arcosh(x);
    return squared ? d * d : d;
  });
  return q.tape->push(std::move(out), {q, p}, [q, p, k, squared, u](Tape& t, const Matrix& g) {
    const Matrix du = u.unaryExpr([squared](double x) {
      if (squared) return x <= 1.0 ? 0.0 : 2.0 * manifold::raw::arcosh_over_sqrt(x);
      return x <= 1.0 + kArcoshGradFloor ? 0.0 : 1.0 / std::sqrt(x * x - 1.0);
    });
    const Matrix dip = -g.cwiseProduct(du) / k;  // d loss / d <q_i, p_j>_L
    if (t.requires_grad(q.id)) t.accumulate(q.id, flip_time(dip * t.value(p.id)));
    if (t.requires_grad(p.id)) t.accumulate(p.id, flip_time(dip.transpose() * t.value(q.id)));
  });
}

Var euclidean_distance(Var q, Var p, bool squared) {
  require(q.cols() == p.cols(), "euclidean_distance: dimensions differ");
  const Matrix d2 = kernels::squared_euclidean_pairwise(q.value(), p.value());
  Matrix out = squared ? d2 : Matrix(d2.cwiseSqrt());
  return q.tape->push(std::move(out), {q, p}, [q, p, squared, d2](Tape& t, const Matrix& g) {
    Matrix w = g;  // d loss / d (||q_i - p_j||^2)
    if (!squared) {
      w = g.binaryExpr(d2, [](double gi, double s) { return s > 0.0 ? gi / (2.0 * std::sqrt(s)) : 0.0; });
    }
    const Matrix& qv = t.value(q.id);
    const Matrix& pv = t.value(p.id);
    if (t.requires_grad(q.id)) {
      Matrix dq = 2.0 * (qv.array().colwise() * w.rowwise().sum().array()).matrix() - 2.0 * w * pv;
      t.accumulate(q.id, dq);
    }
    if (t.requires_grad(p.id)) {
      Matrix dp = 2.0 * (pv.array().colwise() * w.colwise().sum().transpose().array()).matrix() -
                  2.0 * w.transpose() * qv;
      t.accumulate(p.id, dp);
    }
  });
}

// ---------------------------------------------------------------- loss ops

Var geo_kernel_weights(const Matrix& g, Var lambda, Var sigma, geo::KernelKind kind, double p) {
  require(lambda.rows() == 1 && lambda.cols() == 1 && sigma.rows() == 1 && sigma.cols() == 1,
          "geo_kernel_weights: lambda and sigma must be 1 x 1");
  const double lam = lambda.scalar();
  const double sig = sigma.scalar();
  require(sig > 0.0, "geo_kernel_weights: sigma must be positive");
  Matrix kv(g.rows(), g.cols());
  Matrix dk(g.rows(), g.cols());  // d kernel / d sigma
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const double x = g(i, j) / sig;
      switch (kind) {
        case geo::KernelKind::Laplace:
          kv(i, j) = std::exp(-x);
          dk(i, j) = kv(i, j) * x / sig;
          break;
        case geo::KernelKind::Gauss:
          kv(i, j) = std::exp(-x * x);
          dk(i, j) = kv(i, j) * 2.0 * x * x / sig;
          break;
        case geo::KernelKind::Inverse:
          kv(i, j) = std::pow(1.0 + x, -p);
          dk(i, j) = p * std::pow(1.0 + x, -p - 1.0) * x / sig;
          break;
      }
    }
  }
  Matrix w = (lam * kv).array() + 1.0;
  return lambda.tape->push(std::move(w), {lambda, sigma}, [lambda, sigma, kv, dk](Tape& t, const Matrix& gr) {
    const double lam2 = t.value(lambda.id)(0, 0);
    t.accumulate(lambda.id, Matrix::Constant(1, 1, gr.cwiseProduct(kv).sum()));
    t.accumulate(sigma.id, Matrix::Constant(1, 1, lam2 * gr.cwiseProduct(dk).sum()));
  });
}

Var weighted_infonce(Var dist, const std::vector<int>& pos, Var weights, Var tau, const Matrix* mask) {
  const Eigen::Index b = dist.rows(), m = dist.cols();
  require(static_cast<Eigen::Index>(pos.size()) == b, "weighted_infonce: one positive index per row");
  same_shape(dist, weights, "weighted_infonce");
  require(tau.rows() == 1 && tau.cols() == 1 && tau.scalar() > 0.0, "weighted_infonce: tau must be a positive scalar");
  if (mask) require(mask->rows() == b && mask->cols() == m, "weighted_infonce: mask shape mismatch");
  require(b > 0, "weighted_infonce: empty batch");
  const double tv = tau.scalar();
  const Matrix& d = dist.value();
  const Matrix& w = weights.value();

  // c(i,j): coefficient of exp(l_ij) in the denominator; e(i,j) = exp(l_ij - M_i).
  Matrix c(b, m), e(b, m);
  Eigen::VectorXd denom(b);
  double total = 0.0;
  for (Eigen::Index i = 0; i < b; ++i) {
    const int pi = pos[i];
    require(pi >= 0 && pi < m, "weighted_infonce: positive index out of range");
    double mx = -std::numeric_limits<double>::infinity();
    int negatives = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const bool is_pos = j == pi;
      const double cij = is_pos ? 1.0 : (mask ? (*mask)(i, j) : 1.0) * w(i, j);
      c(i, j) = cij;
      if (!is_pos && cij > 0.0) ++negatives;
      if (cij > 0.0) mx = std::max(mx, -d(i, j) / tv);
    }
    if (negatives == 0) throw ContractViolation("weighted_infonce: row " + std::to_string(i) + " has no negatives");
    double s = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      e(i, j) = c(i, j) > 0.0 ? std::exp(-d(i, j) / tv - mx) : 0.0;
      s += c(i, j) * e(i, j);
    }
    denom[i] = s;
    total += d(i, pi) / tv + mx + std::log(s);
  }
  Matrix out = Matrix::Constant(1, 1, total / static_cast<double>(b));
  return dist.tape->push(std::move(out), {dist, weights, tau},
                         [dist, weights, tau, pos, c, e, denom, tv, b, m](Tape& t, const Matrix& g) {
                           const double scale = g(0, 0) / static_cast<double>(b);
                           const Matrix& dv = t.value(dist.id);
                           Matrix gd(b, m), gw = Matrix::Zero(b, m);
                           double gt = 0.0;
                           for (Eigen::Index i = 0; i < b; ++i) {
                             for (Eigen::Index j = 0; j < m; ++j) {
                               const double pij = c(i, j) * e(i, j) / denom[i];
                               const double dl = pij - (j == pos[i] ? 1.0 : 0.0);  // d loss_i / d l_ij
                               gd(i, j) = -dl / tv * scale;
                               gt += dl * dv(i, j) / (tv * tv) * scale;
                               if (j != pos[i] && c(i, j) > 0.0) gw(i, j) = pij / t.value(weights.id)(i, j) * scale;
                             }
                           }
                           t.accumulate(dist.id, gd);
                           t.accumulate(weights.id, gw);
                           t.accumulate(tau.id, Matrix::Constant(1, 1, gt));
                         });
}

}  // namespace hierloc::ad
