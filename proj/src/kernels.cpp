#include "hierloc/kernels.hpp"

namespace hierloc::kernels {

namespace {

// Below this many multiply-adds the OpenMP fork costs more than it saves.
constexpr Eigen::Index kParallelWork = 1 << 16;

// Row-major copies give unit-stride inner loops for both operands.
using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline double sq_dist(const double* a, const double* b, Eigen::Index n) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

void lorentz_inner_pairwise_serial(const Matrix& q, const Matrix& p, Matrix& out) {
  const RowMajor qr = q, pr = p;
  const Eigen::Index n = q.cols();
  out.resize(q.rows(), p.rows());
  for (Eigen::Index i = 0; i < qr.rows(); ++i) {
    for (Eigen::Index j = 0; j < pr.rows(); ++j) out(i, j) = lorentz_dot(qr.row(i).data(), pr.row(j).data(), n, 1, 1);
  }
}

void lorentz_inner_pairwise_omp(const Matrix& q, const Matrix& p, Matrix& out) {
  const RowMajor qr = q, pr = p;
  const Eigen::Index n = q.cols();
  const Eigen::Index b = qr.rows(), m = pr.rows();
  out.resize(b, m);
#pragma omp parallel for schedule(static) collapse(2)
  for (Eigen::Index i = 0; i < b; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) out(i, j) = lorentz_dot(qr.row(i).data(), pr.row(j).data(), n, 1, 1);
  }
}

Matrix lorentz_inner_pairwise(const Matrix& q, const Matrix& p) {
  Matrix out;
  if (q.rows() * p.rows() * q.cols() >= kParallelWork) {
    lorentz_inner_pairwise_omp(q, p, out);
  } else {
    lorentz_inner_pairwise_serial(q, p, out);
  }
  return out;
}

void flipped_scores_serial(const Matrix& p, const Vector& q, Vector& out) {
  const RowMajor pr = p;
  out.resize(p.rows());
  for (Eigen::Index j = 0; j < pr.rows(); ++j) out[j] = lorentz_dot(q.data(), pr.row(j).data(), q.size(), 1, 1);
}

void flipped_scores_omp(const Matrix& p, const Vector& q, Vector& out) {
  const RowMajor pr = p;
  const Eigen::Index m = pr.rows();
  out.resize(m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < m; ++j) out[j] = lorentz_dot(q.data(), pr.row(j).data(), q.size(), 1, 1);
}

Vector flipped_scores(const Matrix& p, const Vector& q) {
  Vector out;
  if (p.rows() * p.cols() >= kParallelWork) {
    flipped_scores_omp(p, q, out);
  } else {
    flipped_scores_serial(p, q, out);
  }
  return out;
}

void squared_euclidean_pairwise_serial(const Matrix& q, const Matrix& p, Matrix& out) {
  const RowMajor qr = q, pr = p;
  out.resize(q.rows(), p.rows());
  for (Eigen::Index i = 0; i < qr.rows(); ++i) {
    for (Eigen::Index j = 0; j < pr.rows(); ++j) out(i, j) = sq_dist(qr.row(i).data(), pr.row(j).data(), q.cols());
  }
}

void squared_euclidean_pairwise_omp(const Matrix& q, const Matrix& p, Matrix& out) {
  const RowMajor qr = q, pr = p;
  const Eigen::Index b = qr.rows(), m = pr.rows();
  out.resize(b, m);
#pragma omp parallel for schedule(static) collapse(2)
  for (Eigen::Index i = 0; i < b; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) out(i, j) = sq_dist(qr.row(i).data(), pr.row(j).data(), q.cols());
  }
}

Matrix squared_euclidean_pairwise(const Matrix& q, const Matrix& p) {
  Matrix out;
  if (q.rows() * p.rows() * q.cols() >= kParallelWork) {
    squared_euclidean_pairwise_omp(q, p, out);
  } else {
    squared_euclidean_pairwise_serial(q, p, out);
  }
  return out;
}

}  // namespace hierloc::kernels
