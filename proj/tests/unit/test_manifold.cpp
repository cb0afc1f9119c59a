#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hierloc/manifold.hpp"

using namespace hierloc::manifold;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Vector random_tangent(std::mt19937_64& rng, Eigen::Index d, double max_norm) {
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(0.0, max_norm);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = n(rng);
  return v.normalized() * u(rng);
}

// Closed-form exp map evaluated in long double.
std::vector<long double> exp_origin_ld(const Vector& v, long double k) {
  const long double r = std::sqrt(k);
  long double n = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) n += static_cast<long double>(v[i]) * v[i];
  n = std::sqrt(n);
  std::vector<long double> out(v.size() + 1);
  out[0] = r * std::cosh(n / r);
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i + 1] = n == 0 ? 0 : r * std::sinh(n / r) * v[i] / n;
  return out;
}

}  // namespace

TEST(Curvature, RadiusSquaredIsK) {
  for (double k : {0.1, 0.8, 1.0, 3.7, 100.0}) {
    Curvature c(k);
    EXPECT_NEAR(c.radius() * c.radius(), k, 4 * std::numeric_limits<double>::epsilon() * k);
  }
  EXPECT_THROW(Curvature(0.0), hierloc::ContractViolation);
  EXPECT_THROW(Curvature(-1.0), hierloc::ContractViolation);
  EXPECT_THROW(Curvature(std::nan("")), hierloc::ContractViolation);
}

TEST(LorentzInner, Examples) {
  EXPECT_DOUBLE_EQ(lorentz_inner(vec({1, 0, 0}), vec({1, 0, 0})), -1.0);
  EXPECT_DOUBLE_EQ(lorentz_inner(vec({2, 1, 3}), vec({1, 4, 5})), -2.0 + 4.0 + 15.0);
  EXPECT_THROW(lorentz_inner(vec({1, 0}), vec({1, 0, 0})), hierloc::ContractViolation);
  EXPECT_THROW(lorentz_inner(vec({1}), vec({1})), hierloc::ContractViolation);
}

TEST(ExpOrigin, ZeroIsOrigin) {
  Curvature c(0.8);
  auto x = exp_origin({Vector::Zero(3), c});
  EXPECT_EQ(x.coords(), origin(c, 3).coords());
  EXPECT_DOUBLE_EQ(x.time(), c.radius());
}

TEST(ExpOrigin, UnitCurvatureExample) {
  Curvature c(1.0);
  auto x = exp_origin({vec({1, 0}), c});
  EXPECT_NEAR(x.coords()[0], 1.5430806348152437, 1e-15);
  EXPECT_NEAR(x.coords()[1], 1.1752011936438014, 1e-15);
  EXPECT_EQ(x.coords()[2], 0.0);
  auto v = log_origin(LorentzPoint::from_ambient(vec({1.5430806348152437, 1.1752011936438014, 0}), c));
  EXPECT_NEAR(v.v[0], 1.0, 1e-12);
  EXPECT_NEAR(v.v[1], 0.0, 1e-15);
}

TEST(ExpOrigin, MatchesExtendedPrecisionOracle) {
  std::mt19937_64 rng(7);
  for (double k : {0.3, 0.8, 2.0}) {
    for (int t = 0; t < 200; ++t) {
      Vector v = random_tangent(rng, 5, 10.0);
      auto x = exp_origin({v, Curvature(k)});
      auto ref = exp_origin_ld(v, k);
      for (Eigen::Index i = 0; i < x.coords().size(); ++i)
        EXPECT_NEAR(x.coords()[i], static_cast<double>(ref[i]), 1e-13 * std::max(1.0L, std::fabs(ref[0])));
    }
  }
}

TEST(ExpOrigin, RejectsNonFinite) {
  EXPECT_THROW(exp_origin({vec({1, std::nan("")}), Curvature(1.0)}), hierloc::ContractViolation);
}

TEST(LogOrigin, OriginMapsToZero) {
  Curvature c(0.8);
  EXPECT_EQ(log_origin(origin(c, 4)).v, Vector::Zero(4));
}

TEST(LogOrigin, RoundTripProperty) {
  std::mt19937_64 rng(11);
  for (double k : {0.25, 0.8, 1.0, 4.0}) {
    Curvature c(k);
    for (int t = 0; t < 2000; ++t) {
      Vector v = random_tangent(rng, 1 + t % 8, 10.0);
      if (t % 50 == 0) v *= 1e-9;
      auto back = log_origin(exp_origin({v, c})).v;
      EXPECT_LE((back - v).norm(), 1e-9 * (1 + v.norm()));
    }
  }
}

TEST(LorentzPoint, FromAmbientValidates) {
  Curvature c(1.0);
  EXPECT_NO_THROW(LorentzPoint::from_ambient(vec({1, 0, 0}), c));
  EXPECT_THROW(LorentzPoint::from_ambient(vec({1.1, 0, 0}), c), hierloc::ContractViolation);
  EXPECT_THROW(LorentzPoint::from_ambient(vec({-1, 0, 0}), c), hierloc::ContractViolation);
}

TEST(Distance, Examples) {
  Curvature c(1.0);
  auto x = LorentzPoint::from_ambient(vec({1, 0, 0}), c);
  auto y = LorentzPoint::from_ambient(vec({std::cosh(2.0), std::sinh(2.0), 0}), c);
  EXPECT_NEAR(geodesic_distance(x, y), 2.0, 1e-12);
  EXPECT_EQ(geodesic_distance(x, x), 0.0);
  EXPECT_EQ(geodesic_distance(y, y), 0.0);
  auto z = origin(Curvature(2.0), 2);
  EXPECT_THROW(geodesic_distance(x, z), hierloc::ContractViolation);
}

TEST(Distance, OriginDistanceIsNormOverRadius) {
  std::mt19937_64 rng(3);
  for (double k : {0.5, 0.8, 2.0}) {
    Curvature c(k);
    for (int t = 0; t < 1000; ++t) {
      Vector v = random_tangent(rng, 4, 10.0);
      double d = geodesic_distance(origin(c, 4), exp_origin({v, c}));
      EXPECT_NEAR(d, v.norm() / c.radius(), 1e-9 * std::max(1.0, v.norm() / c.radius()));
    }
  }
}

TEST(Distance, SymmetryCoshIdentityAndTriangle) {
  std::mt19937_64 rng(5);
  Curvature c(0.8);
  for (int t = 0; t < 1000; ++t) {
    auto x = exp_origin({random_tangent(rng, 3, 4.0), c});
    auto y = exp_origin({random_tangent(rng, 3, 4.0), c});
    auto z = exp_origin({random_tangent(rng, 3, 4.0), c});
    const double dxy = geodesic_distance(x, y);
    EXPECT_EQ(dxy, geodesic_distance(y, x));
    const double u = -lorentz_inner(x.coords(), y.coords()) / c.k();
    EXPECT_NEAR(std::cosh(dxy), std::max(1.0, u), 1e-9 * std::max(1.0, u));
    EXPECT_LE(geodesic_distance(x, z), dxy + geodesic_distance(y, z) + 1e-7);
  }
}

TEST(Project, Examples) {
  Curvature c(1.0);
  EXPECT_EQ(project_to_hyperboloid(Vector::Zero(2), c).coords(), origin(c, 2).coords());
  auto p = project_to_hyperboloid(vec({3, 4}), c);
  EXPECT_DOUBLE_EQ(p.time(), std::sqrt(26.0));
  auto x = exp_origin({vec({0.3, -1.2, 2.0}), Curvature(0.8)});
  auto q = project_to_hyperboloid(x.spatial(), Curvature(0.8));
  EXPECT_LE((q.coords() - x.coords()).norm(), 1e-12 * x.time());
  EXPECT_LE(constraint_residual(q.coords(), Curvature(0.8)), 1e-15);
}

TEST(ExpAt, SpecializesToOrigin) {
  Curvature c(0.8);
  auto o = origin(c, 3);
  Vector w = vec({0.4, -0.2, 1.1});
  Vector v(4);
  v << 0, w;
  auto a = exp_at(o, v);
  auto b = exp_origin({w, c});
  EXPECT_LE((a.coords() - b.coords()).norm(), 1e-12);
  EXPECT_EQ(exp_at(o, Vector::Zero(4)).coords(), o.coords());
}

TEST(ExpAt, RejectsNonTangent) {
  Curvature c(1.0);
  auto o = origin(c, 2);
  EXPECT_THROW(exp_at(o, vec({1, 0, 0})), hierloc::ContractViolation);
}

TEST(LogAt, RoundTripAndSpecialCases) {
  std::mt19937_64 rng(9);
  Curvature c(0.8);
  for (int t = 0; t < 500; ++t) {
    auto p = exp_origin({random_tangent(rng, 3, 3.0), c});
    Vector raw(4);
    raw << 0, random_tangent(rng, 3, 2.0);
    raw[0] = std::normal_distribution<double>()(rng);
    Vector v = project_to_tangent(p, raw);
    EXPECT_LE(std::fabs(lorentz_inner(p.coords(), v)), 1e-9 * (1 + v.norm() * p.time()));
    auto x = exp_at(p, v);
    EXPECT_LE(constraint_residual(x.coords(), c), 1e-9);
    Vector back = log_at(p, x);
    EXPECT_LE((back - v).norm(), 1e-7 * (1 + v.norm()));
    EXPECT_LE(log_at(p, p).norm(), 1e-12);
  }
  auto x = exp_origin({vec({0.5, 0.1, -0.7}), c});
  Vector l = log_at(origin(c, 3), x);
  EXPECT_NEAR(l[0], 0.0, 1e-12);
  EXPECT_LE((l.tail(3) - log_origin(x).v).norm(), 1e-12);
}

TEST(Raw, SeriesBranchesAreContinuous) {
  using namespace raw;
  EXPECT_DOUBLE_EQ(sinhc(0.0), 1.0);
  EXPECT_NEAR(sinhc(1e-7), std::sinh(1e-7) / 1e-7, 1e-15);
  EXPECT_NEAR(sinhc(0.5), std::sinh(0.5) / 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(arcosh_over_sqrt(1.0), 1.0);
  EXPECT_NEAR(arcosh_over_sqrt(1.0 + 1e-9), 1.0, 1e-9);
  EXPECT_NEAR(arcosh_over_sqrt(3.0), std::acosh(3.0) / std::sqrt(8.0), 1e-15);
  EXPECT_EQ(clamped_arcosh(0.5), 0.0);
}
