#pragma once

// Geolocation metrics: per-level accuracy, distance errors, GeoScore and
// recall at fixed radii (inclusive thresholds).

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "hierloc/dataset.hpp"
#include "hierloc/geodesy.hpp"

namespace hierloc::metrics {

inline constexpr std::array<double, 5> kRecallKm = {1.0, 25.0, 200.0, 750.0, 2500.0};

struct Located {
  std::array<std::string, data::kLevels> ids;
  geo::GeoCoord coords;
};

struct MetricsReport {
  std::size_t n = 0;
  std::array<double, data::kLevels> accuracy{};
  double mean_km = 0.0;
  double median_km = 0.0;
  double geoscore = 0.0;
  std::array<double, kRecallKm.size()> recall{};

  // Field names shared by the training log and the eval report.
  nlohmann::json to_json() const;
  static MetricsReport from_json(const nlohmann::json& j);
};

// Throws ContractViolation when the lists differ in length.
MetricsReport evaluate(const std::vector<Located>& predictions, const std::vector<Located>& truth);

}  // namespace hierloc::metrics
