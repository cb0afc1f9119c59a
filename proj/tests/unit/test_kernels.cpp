#include <random>

#include <gtest/gtest.h>

#include "hierloc/kernels.hpp"
#include "hierloc/manifold.hpp"

using namespace hierloc::kernels;

namespace {

Matrix randm(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

}  // namespace

TEST(Kernels, LorentzDotMatchesManifold) {
  Matrix q = randm(1, 6, 1), p = randm(1, 6, 2);
  EXPECT_DOUBLE_EQ(lorentz_dot(q.data(), p.data(), 6, 1, 1),
                   hierloc::manifold::lorentz_inner(q.row(0).transpose(), p.row(0).transpose()));
}

TEST(Kernels, SerialAndOmpAreBitwiseIdentical) {
  for (auto [b, m, d] : {std::tuple{1, 1, 2}, {3, 17, 5}, {64, 700, 9}, {5, 20000, 4}}) {
    Matrix q = randm(b, d, 3), p = randm(m, d, 4);
    Matrix s, o;
    lorentz_inner_pairwise_serial(q, p, s);
    lorentz_inner_pairwise_omp(q, p, o);
    EXPECT_TRUE((s.array() == o.array()).all());
    EXPECT_TRUE((lorentz_inner_pairwise(q, p).array() == s.array()).all());
    for (int i = 0; i < std::min(b, 3); ++i)
      for (int j = 0; j < std::min(m, 3); ++j)
        EXPECT_NEAR(s(i, j), hierloc::manifold::lorentz_inner(q.row(i).transpose(), p.row(j).transpose()), 1e-12);

    squared_euclidean_pairwise_serial(q, p, s);
    squared_euclidean_pairwise_omp(q, p, o);
    EXPECT_TRUE((s.array() == o.array()).all());
    EXPECT_NEAR(s(0, 0), (q.row(0) - p.row(0)).squaredNorm(), 1e-12);

    Vector vs, vo;
    Vector qq = q.row(0).transpose();
    flipped_scores_serial(p, qq, vs);
    flipped_scores_omp(p, qq, vo);
    EXPECT_TRUE((vs.array() == vo.array()).all());
    EXPECT_TRUE((flipped_scores(p, qq).array() == vs.array()).all());
    Vector flipped = qq;
    flipped[0] = -flipped[0];
    EXPECT_NEAR(vs[0], flipped.dot(p.row(0).transpose()), 1e-12);
  }
}

TEST(Kernels, EmptyInputs) {
  Matrix q(0, 3), p = randm(4, 3, 5), out;
  lorentz_inner_pairwise_omp(q, p, out);
  EXPECT_EQ(out.rows(), 0);
  EXPECT_EQ(out.cols(), 4);
}
