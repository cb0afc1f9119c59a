#pragma once

// Dense Lorentz inner-product kernels. Each has a serial reference and an
// OpenMP version; both evaluate every entry with the same loop so results are
// bitwise identical.

#include <Eigen/Dense>

namespace hierloc::kernels {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// -a0*b0 + sum_{i>=1} ai*bi over raw pointers of length n.
inline double lorentz_dot(const double* a, const double* b, Eigen::Index n, Eigen::Index stride_a,
                          Eigen::Index stride_b) {
  double s = -a[0] * b[0];
  for (Eigen::Index i = 1; i < n; ++i) s += a[i * stride_a] * b[i * stride_b];
  return s;
}

// out(i, j) = <q_i, p_j>_L for rows of q (b x D) and p (m x D).
void lorentz_inner_pairwise_serial(const Matrix& q, const Matrix& p, Matrix& out);
void lorentz_inner_pairwise_omp(const Matrix& q, const Matrix& p, Matrix& out);
// Dispatches on problem size.
Matrix lorentz_inner_pairwise(const Matrix& q, const Matrix& p);

// scores(j) = flip(q) . p_j = <q, p_j>_L for every row p_j.
void flipped_scores_serial(const Matrix& p, const Vector& q, Vector& out);
void flipped_scores_omp(const Matrix& p, const Vector& q, Vector& out);
Vector flipped_scores(const Matrix& p, const Vector& q);

// out(i, j) = ||q_i - p_j||^2.
void squared_euclidean_pairwise_serial(const Matrix& q, const Matrix& p, Matrix& out);
void squared_euclidean_pairwise_omp(const Matrix& q, const Matrix& p, Matrix& out);
Matrix squared_euclidean_pairwise(const Matrix& q, const Matrix& p);

}  // namespace hierloc::kernels
