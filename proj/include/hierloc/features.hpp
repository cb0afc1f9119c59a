#pragma once

// Deterministic feature providers standing in for pretrained encoders, and
// the multiscale sinusoidal location encoding.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "hierloc/geodesy.hpp"

namespace hierloc::features {

inline constexpr std::size_t kDefaultScales = 16;
inline constexpr std::size_t kDefaultTextDim = 32;
inline constexpr std::size_t kDefaultImageDim = 64;

std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed = 0);

// Unit vector seeded from the name. Throws ContractViolation on an empty name.
std::vector<double> hash_text_features(std::string_view name, std::size_t d_text,
                                       std::uint64_t seed = 0);

// (sin 2^s pi u, cos 2^s pi u, sin 2^s pi v, cos 2^s pi v) for s = 0..S-1.
// u, v must lie in [0, 1].
std::vector<double> location_encoding(double u, double v, std::size_t scales = kDefaultScales);
// u = (lat + 90) / 180, v = (lon + 180) / 360.
std::vector<double> location_encoding(const geo::GeoCoord& c, std::size_t scales = kDefaultScales);

class SyntheticImageEncoder {
 public:
  SyntheticImageEncoder(std::size_t d_img, std::uint64_t seed);

  std::size_t dim() const { return d_img_; }
  // Unit-norm prototype for a city id.
  std::vector<double> prototype(std::string_view city_id) const;
  // prototype + noise * N(0, I), one draw from `rng`.
  std::vector<double> encode(std::string_view city_id, double noise, std::mt19937_64& rng) const;

 private:
  std::size_t d_img_;
  std::uint64_t seed_;
};

}  // namespace hierloc::features
