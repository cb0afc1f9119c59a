#pragma once

// Desk-scale synthetic world: nested entities at geometrically shrinking
// radii, per-image rows jittered around city centers, city-prototype image
// features.
//
// Files written by write_world():
//   metadata.csv      image_id,country,region,subregion,city,lat,lon,split
//   features.bin      feature sidecar, row i = data row i of metadata.csv
//   ground_truth.csv  image_id,country_id,region_id,subregion_id,city_id,lat,lon

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hierloc/feature_file.hpp"

namespace hierloc::features {

struct SyntheticWorldSpec {
  int n_countries = 4;
  int regions_per_country = 3;
  int subregions_per_region = 3;
  int cities_per_subregion = 3;
  int images_per_city = 20;
  double visual_noise = 0.1;
  std::uint64_t seed = 0;
  std::size_t d_img = 64;
  double region_radius_km = 1200.0;
  double radius_ratio = 0.25;  // subregion = ratio * region, and so on down to images
  double holdout_fraction = 0.2;
  std::size_t max_rows = 2'000'000;

  void validate() const;
  std::size_t row_count() const;
};

struct SyntheticEntity {
  std::string id;
  std::string name;
  int level = 0;     // 2..5
  int parent = -1;   // index into entities, -1 for countries
  double lat = 0.0;
  double lon = 0.0;
  double radius_km = 0.0;  // max distance of this entity's children from its center
};

struct SyntheticImage {
  std::string image_id;
  int city = -1;  // index into entities
  std::array<std::string, 4> names;  // country code, region, subregion, city
  std::array<std::string, 4> ids;
  double lat = 0.0;
  double lon = 0.0;
  bool holdout = false;
};

struct SyntheticWorld {
  SyntheticWorldSpec spec;
  std::vector<SyntheticEntity> entities;
  std::vector<SyntheticImage> images;
  FeatureFile features;  // row i <-> images[i]
};

SyntheticWorld generate_world(const SyntheticWorldSpec& spec);

void write_metadata_csv(const SyntheticWorld& w, std::ostream& out);
void write_ground_truth_csv(const SyntheticWorld& w, std::ostream& out);
void write_world(const SyntheticWorld& w, const std::filesystem::path& dir);

}  // namespace hierloc::features
