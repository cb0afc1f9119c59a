#include <cmath>

#include <gtest/gtest.h>

#include "hierloc/errors.hpp"
#include "hierloc/metrics.hpp"

using namespace hierloc;
using namespace hierloc::metrics;

namespace {

Located at(std::array<std::string, 4> ids, double lat, double lon) { return {ids, {lat, lon}}; }

}  // namespace

TEST(Metrics, AccuracyDistancesAndRecall) {
  std::vector<Located> truth = {
      at({"A", "A1", "A1a", "A1a1"}, 0, 0),
      at({"A", "A1", "A1a", "A1a2"}, 0, 0),
      at({"B", "B1", "B1a", "B1a1"}, 0, 0),
      at({"B", "B2", "B2a", "B2a1"}, 0, 0),
  };
  const double deg_km = geo::haversine_km({0, 0}, {0, 1});
  std::vector<Located> pred = {
      at({"A", "A1", "A1a", "A1a1"}, 0, 0),
      at({"A", "A1", "A1a", "A1a1"}, 0, 0.2),
      at({"B", "B2", "B2a", "B2a1"}, 0, 5),
      at({"A", "A1", "A1a", "A1a1"}, 0, 90),
  };
  auto r = evaluate(pred, truth);
  EXPECT_EQ(r.n, 4u);
  EXPECT_DOUBLE_EQ(r.accuracy[0], 0.75);
  EXPECT_DOUBLE_EQ(r.accuracy[1], 0.5);
  EXPECT_DOUBLE_EQ(r.accuracy[3], 0.25);
  const double e[4] = {0.0, 0.2 * deg_km, 5 * deg_km, 90 * deg_km};
  EXPECT_NEAR(r.mean_km, (e[0] + e[1] + e[2] + e[3]) / 4, 1e-9);
  EXPECT_NEAR(r.median_km, (e[1] + e[2]) / 2, 1e-9);
  double gs = 0;
  for (double x : e) gs += geo::geoscore(x);
  EXPECT_NEAR(r.geoscore, gs / 4, 1e-9);
  EXPECT_DOUBLE_EQ(r.recall[0], 0.25);  // 1 km
  EXPECT_DOUBLE_EQ(r.recall[1], 0.5);   // 25 km
  EXPECT_DOUBLE_EQ(r.recall[2], 0.5);   // 200 km
  EXPECT_DOUBLE_EQ(r.recall[3], 0.75);  // 750 km
  EXPECT_DOUBLE_EQ(r.recall[4], 0.75);  // 2500 km
}

TEST(Metrics, RecallThresholdIsInclusive) {
  const double km = geo::haversine_km({0, 0}, {0, 1});
  std::vector<Located> truth = {at({"a", "b", "c", "d"}, 0, 0)};
  std::vector<Located> pred = {at({"a", "b", "c", "d"}, 0, 1)};
  auto r = evaluate(pred, truth);
  EXPECT_NEAR(r.mean_km, km, 1e-9);
  EXPECT_DOUBLE_EQ(r.recall[2], 1.0);
  EXPECT_DOUBLE_EQ(r.recall[1], 0.0);
}

TEST(Metrics, JsonRoundTripAndErrors) {
  std::vector<Located> truth = {at({"a", "b", "c", "d"}, 1, 1), at({"a", "b", "c", "e"}, 2, 2)};
  auto r = evaluate(truth, truth);
  EXPECT_DOUBLE_EQ(r.geoscore, 5000.0);
  auto j = r.to_json();
  for (const char* key : {"n", "acc_country", "acc_region", "acc_subregion", "acc_city", "mean_km", "median_km",
                          "geoscore", "recall_1km", "recall_25km", "recall_200km", "recall_750km", "recall_2500km"})
    EXPECT_TRUE(j.contains(key)) << key;
  auto back = MetricsReport::from_json(j);
  EXPECT_EQ(back.to_json(), j);
  EXPECT_THROW(evaluate({truth[0]}, truth), ContractViolation);
}
