#include "hierloc/geodesy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "hierloc/errors.hpp"

namespace hierloc::geo {

namespace {

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

double normalize_longitude(double lon) {
  double x = std::fmod(lon, 360.0);
  if (x <= -180.0) x += 360.0;
  if (x > 180.0) x -= 360.0;
  return x;
}

GeoCoord::GeoCoord(double lat, double lon) {
  if (!std::isfinite(lat) || !std::isfinite(lon)) throw ContractViolation("GeoCoord: non-finite coordinate");
  if (lat < -90.0 || lat > 90.0) throw ContractViolation("GeoCoord: latitude out of range: " + std::to_string(lat));
  lat_ = lat;
  lon_ = normalize_longitude(lon);
}

double haversine_angle(const GeoCoord& a, const GeoCoord& b) {
  const double phi1 = deg2rad(a.lat());
  const double phi2 = deg2rad(b.lat());
  const double dphi = phi2 - phi1;
  // Wrap the longitude difference into [-pi, pi] before halving.
  const double dlam = deg2rad(normalize_longitude(b.lon() - a.lon()));
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlam / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  h = std::min(1.0, std::max(0.0, h));
  return std::asin(std::sqrt(h));
}

double haversine_km(const GeoCoord& a, const GeoCoord& b) {
  return 2.0 * kEarthRadiusKm * haversine_angle(a, b);
}

KernelKind parse_kernel(std::string_view raw) {
  std::string name(raw);
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
  if (name == "laplace") return KernelKind::Laplace;
  if (name == "gauss" || name == "gaussian") return KernelKind::Gauss;
  if (name == "inverse") return KernelKind::Inverse;
  throw ConfigError("unknown kernel '" + std::string(raw) + "' (expected laplace|gauss|inverse)");
}

std::string_view kernel_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::Laplace: return "laplace";
    case KernelKind::Gauss: return "gauss";
    case KernelKind::Inverse: return "inverse";
  }
  return "laplace";
}

void KernelConfig::validate() const {
  if (!(sigma > 0.0)) throw ConfigError("kernel sigma must be > 0");
  if (kind == KernelKind::Inverse && !(p > 0.0)) throw ConfigError("inverse kernel exponent p must be > 0");
}

double kernel_weight(double g, const KernelConfig& cfg) {
  if (g < 0.0) throw ContractViolation("kernel_weight: negative distance");
  const double x = g / cfg.sigma;
  switch (cfg.kind) {
    case KernelKind::Laplace: return std::exp(-x);
    case KernelKind::Gauss: return std::exp(-x * x);
    case KernelKind::Inverse: return std::pow(1.0 + x, -cfg.p);
  }
  return 0.0;
}

double geo_weight(double g, double lambda, const KernelConfig& cfg) {
  return 1.0 + lambda * kernel_weight(g, cfg);
}

double geoscore(double delta_km) {
  if (delta_km < 0.0) throw ContractViolation("geoscore: negative error");
  return 5000.0 * std::exp(-delta_km / kGeoScoreScaleKm);
}

}  // namespace hierloc::geo
