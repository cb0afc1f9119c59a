#include "hierloc/metrics.hpp"

#include <algorithm>
#include <cstdio>

#include "hierloc/errors.hpp"

namespace hierloc::metrics {

namespace {

std::string recall_key(double km) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "recall_%gkm", km);
  return buf;
}

}  // namespace

nlohmann::json MetricsReport::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  for (int l = 0; l < data::kLevels; ++l) j[std::string("acc_") + data::kLevelNames[l]] = accuracy[l];
  j["mean_km"] = mean_km;
  j["median_km"] = median_km;
  j["geoscore"] = geoscore;
  for (std::size_t i = 0; i < kRecallKm.size(); ++i) j[recall_key(kRecallKm[i])] = recall[i];
  return j;
}

MetricsReport MetricsReport::from_json(const nlohmann::json& j) {
  MetricsReport r;
  r.n = j.at("n").get<std::size_t>();
  for (int l = 0; l < data::kLevels; ++l) r.accuracy[l] = j.at(std::string("acc_") + data::kLevelNames[l]).get<double>();
  r.mean_km = j.at("mean_km").get<double>();
  r.median_km = j.at("median_km").get<double>();
  r.geoscore = j.at("geoscore").get<double>();
  for (std::size_t i = 0; i < kRecallKm.size(); ++i) r.recall[i] = j.at(recall_key(kRecallKm[i])).get<double>();
  return r;
}

MetricsReport evaluate(const std::vector<Located>& predictions, const std::vector<Located>& truth) {
  if (predictions.size() != truth.size()) {
    throw ContractViolation("evaluate: " + std::to_string(predictions.size()) + " predictions for " +
                            std::to_string(truth.size()) + " ground-truth rows");
  }
  MetricsReport r;
  r.n = truth.size();
  if (r.n == 0) return r;
  std::vector<double> errors;
  errors.reserve(r.n);
  double score = 0.0;
  for (std::size_t i = 0; i < r.n; ++i) {
    for (int l = 0; l < data::kLevels; ++l) {
      if (predictions[i].ids[l] == truth[i].ids[l]) r.accuracy[l] += 1.0;
    }
    const double km = geo::haversine_km(predictions[i].coords, truth[i].coords);
    errors.push_back(km);
    score += geo::geoscore(km);
    for (std::size_t t = 0; t < kRecallKm.size(); ++t) {
      if (km <= kRecallKm[t]) r.recall[t] += 1.0;
    }
  }
  const double n = static_cast<double>(r.n);
  for (auto& a : r.accuracy) a /= n;
  for (auto& x : r.recall) x /= n;
  double sum = 0.0;
  for (double e : errors) sum += e;
  r.mean_km = sum / n;
  r.geoscore = score / n;
  std::sort(errors.begin(), errors.end());
  r.median_km = r.n % 2 ? errors[r.n / 2] : 0.5 * (errors[r.n / 2 - 1] + errors[r.n / 2]);
  return r;
}

}  // namespace hierloc::metrics
