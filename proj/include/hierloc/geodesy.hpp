#pragma once

#include <string_view>

namespace hierloc::geo {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kGeoScoreScaleKm = 1492.7;

// Latitude/longitude in degrees. Longitude is normalized into (-180, 180].
class GeoCoord {
 public:
  GeoCoord() = default;
  GeoCoord(double lat, double lon);

  double lat() const { return lat_; }
  double lon() const { return lon_; }

  friend bool operator==(const GeoCoord&, const GeoCoord&) = default;

 private:
  double lat_ = 0.0;
  double lon_ = 0.0;
};

double normalize_longitude(double lon);

// arcsin(sqrt(a)): half the central angle, in radians.
double haversine_angle(const GeoCoord& a, const GeoCoord& b);
double haversine_km(const GeoCoord& a, const GeoCoord& b);

enum class KernelKind { Laplace, Gauss, Inverse };

KernelKind parse_kernel(std::string_view name);
std::string_view kernel_name(KernelKind kind);

struct KernelConfig {
  KernelKind kind = KernelKind::Laplace;
  double sigma = 0.1;
  double p = 1.0;  // Inverse only

  void validate() const;
};

double kernel_weight(double g, const KernelConfig& cfg);
// 1 + lambda * k(g)
double geo_weight(double g, double lambda, const KernelConfig& cfg);

double geoscore(double delta_km);

}  // namespace hierloc::geo
