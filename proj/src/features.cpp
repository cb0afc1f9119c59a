#include "hierloc/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hierloc/errors.hpp"

namespace hierloc::features {

std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed) {
  std::uint64_t h = 14695981039346656037ULL ^ (seed * 0x9E3779B97F4A7C15ULL);
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

std::vector<double> unit_gaussian(std::uint64_t seed, std::size_t d) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<double> v(d);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (auto& x : v) {
      x = n01(rng);
      norm2 += x * x;
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& x : v) x *= inv;
  return v;
}

}  // namespace

std::vector<double> hash_text_features(std::string_view name, std::size_t d_text, std::uint64_t seed) {
  if (name.empty()) throw ContractViolation("hash_text_features: empty name");
  if (d_text == 0) throw ContractViolation("hash_text_features: zero dimension");
  return unit_gaussian(fnv1a64(name, seed), d_text);
}

std::vector<double> location_encoding(double u, double v, std::size_t scales) {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
    throw ContractViolation("location_encoding: coordinates must lie in [0,1]^2");
  }
  std::vector<double> out;
  out.reserve(4 * scales);
  double f = std::numbers::pi;
  for (std::size_t s = 0; s < scales; ++s, f *= 2.0) {
    out.push_back(std::sin(f * u));
    out.push_back(std::cos(f * u));
    out.push_back(std::sin(f * v));
    out.push_back(std::cos(f * v));
  }
  return out;
}

std::vector<double> location_encoding(const geo::GeoCoord& c, std::size_t scales) {
  const double u = std::clamp((c.lat() + 90.0) / 180.0, 0.0, 1.0);
  const double v = std::clamp((c.lon() + 180.0) / 360.0, 0.0, 1.0);
  return location_encoding(u, v, scales);
}

SyntheticImageEncoder::SyntheticImageEncoder(std::size_t d_img, std::uint64_t seed) : d_img_(d_img), seed_(seed) {
  if (d_img == 0) throw ContractViolation("SyntheticImageEncoder: zero dimension");
}

std::vector<double> SyntheticImageEncoder::prototype(std::string_view city_id) const {
  return unit_gaussian(fnv1a64(city_id, seed_ ^ 0xC1A551F1EDULL), d_img_);
}

std::vector<double> SyntheticImageEncoder::encode(std::string_view city_id, double noise,
                                                  std::mt19937_64& rng) const {
  auto v = prototype(city_id);
  if (noise > 0.0) {
    std::normal_distribution<double> n01(0.0, 1.0);
    for (auto& x : v) x += noise * n01(rng);
  }
  return v;
}

}  // namespace hierloc::features
