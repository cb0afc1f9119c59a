#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hierloc/errors.hpp"
#include "hierloc/geodesy.hpp"

using namespace hierloc::geo;

TEST(Haversine, AnalyticDistances) {
  const double quarter = kEarthRadiusKm * std::numbers::pi / 2;
  EXPECT_NEAR(haversine_km({0, 0}, {0, 90}), quarter, 1e-6);
  EXPECT_NEAR(haversine_km({0, 0}, {90, 0}), quarter, 1e-6);
  EXPECT_NEAR(haversine_km({0, 0}, {0, 180}), 2 * quarter, 1e-6);
  EXPECT_NEAR(haversine_km({45, 10}, {-45, -170}), 2 * quarter, 1e-6);
  EXPECT_NEAR(haversine_km({0, 0}, {0, 90}), 10007.543, 0.01);
  EXPECT_NEAR(haversine_km({0, 0}, {0, 180}), 20015.087, 0.01);
  EXPECT_EQ(haversine_km({12.5, -7}, {12.5, -7}), 0.0);
}

TEST(Haversine, AngleIsHalfCentralAngle) {
  EXPECT_NEAR(haversine_angle({0, 0}, {0, 90}), std::numbers::pi / 4, 1e-15);
  EXPECT_NEAR(haversine_angle({0, 0}, {0, 180}), std::numbers::pi / 2, 1e-15);
}

TEST(Haversine, MatchesSphericalLawOfCosines) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> lat(-89, 89), lon(-180, 180);
  for (int i = 0; i < 1000; ++i) {
    GeoCoord a(lat(rng), lon(rng)), b(lat(rng), lon(rng));
    auto rad = [](double d) { return d * std::numbers::pi / 180; };
    double c = std::sin(rad(a.lat())) * std::sin(rad(b.lat())) +
               std::cos(rad(a.lat())) * std::cos(rad(b.lat())) * std::cos(rad(a.lon() - b.lon()));
    double ref = kEarthRadiusKm * std::acos(std::clamp(c, -1.0, 1.0));
    EXPECT_NEAR(haversine_km(a, b), ref, 1e-6 * std::max(1.0, ref) + 1e-3);
    EXPECT_DOUBLE_EQ(haversine_km(a, b), haversine_km(b, a));
  }
}

TEST(GeoCoord, Validation) {
  EXPECT_THROW(GeoCoord(91, 0), hierloc::ContractViolation);
  EXPECT_THROW(GeoCoord(std::nan(""), 0), hierloc::ContractViolation);
  EXPECT_DOUBLE_EQ(GeoCoord(0, 190).lon(), -170);
  EXPECT_DOUBLE_EQ(GeoCoord(0, -180).lon(), 180);
  EXPECT_DOUBLE_EQ(normalize_longitude(540), 180);
}

TEST(GeoScore, DirectEvaluation) {
  EXPECT_EQ(geoscore(0.0), 5000.0);
  EXPECT_NEAR(geoscore(1492.7), 5000.0 * std::exp(-1.0), 1e-12);
  EXPECT_NEAR(geoscore(1492.7), 1839.397, 0.001);
  EXPECT_THROW(geoscore(-1.0), hierloc::ContractViolation);
}

TEST(Kernel, Values) {
  KernelConfig lap{KernelKind::Laplace, 0.1, 1.0};
  KernelConfig gau{KernelKind::Gauss, 0.1, 1.0};
  KernelConfig inv{KernelKind::Inverse, 0.1, 2.0};
  EXPECT_DOUBLE_EQ(kernel_weight(0.0, lap), 1.0);
  EXPECT_DOUBLE_EQ(kernel_weight(0.0, gau), 1.0);
  EXPECT_DOUBLE_EQ(kernel_weight(0.0, inv), 1.0);
  EXPECT_NEAR(kernel_weight(0.1, lap), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(kernel_weight(0.2, gau), std::exp(-4.0), 1e-15);
  EXPECT_NEAR(kernel_weight(0.1, inv), 0.25, 1e-15);
  EXPECT_NEAR(geo_weight(0.1, 2.0, lap), 1 + 2 * std::exp(-1.0), 1e-15);
  EXPECT_EQ(geo_weight(0.3, 0.0, lap), 1.0);
  EXPECT_THROW(kernel_weight(-0.1, lap), hierloc::ContractViolation);
}

TEST(Kernel, ParseAndValidate) {
  EXPECT_EQ(parse_kernel("laplace"), KernelKind::Laplace);
  EXPECT_EQ(parse_kernel("Gauss"), KernelKind::Gauss);
  EXPECT_EQ(parse_kernel("inverse"), KernelKind::Inverse);
  EXPECT_THROW(parse_kernel("cauchy"), hierloc::ConfigError);
  EXPECT_EQ(kernel_name(KernelKind::Gauss), "gauss");
  EXPECT_THROW((KernelConfig{KernelKind::Laplace, 0.0, 1.0}.validate()), hierloc::ConfigError);
}

TEST(Kernel, MonotoneNonIncreasing) {
  for (auto kind : {KernelKind::Laplace, KernelKind::Gauss, KernelKind::Inverse}) {
    KernelConfig cfg{kind, 0.05, 1.5};
    double prev = kernel_weight(0.0, cfg);
    for (double g = 0.001; g < 1.6; g += 0.01) {
      double w = kernel_weight(g, cfg);
      EXPECT_LE(w, prev);
      EXPECT_GE(w, 0.0);
      prev = w;
    }
  }
}

TEST(Kernel, SpecExamples) {
  KernelConfig lap{KernelKind::Laplace, 0.1, 1.0};
  EXPECT_NEAR(kernel_weight(0.1, lap), 0.367879, 1e-6);
  EXPECT_NEAR(kernel_weight(0.1, KernelConfig{KernelKind::Inverse, 0.1, 1.0}), 0.5, 1e-15);
  EXPECT_NEAR(geo_weight(0.0, 1.5, lap), 2.5, 1e-15);
  EXPECT_NEAR(geo_weight(5.0, 1.0, lap), 1.0, 1e-9);
  EXPECT_NEAR(geo_weight(0.1, 1.0, lap), 1.367879, 1e-6);
}

TEST(GeoScore, AntipodalAndMonotone) {
  // 20015.09 / 1492.7 = 13.408649, exp(-13.408649) = 1.502098e-6
  EXPECT_NEAR(geoscore(20015.09), 7.51049e-3, 1e-8);
  double prev = geoscore(0);
  for (double d = 10; d < 21000; d += 10) {
    EXPECT_LT(geoscore(d), prev);
    prev = geoscore(d);
  }
}
