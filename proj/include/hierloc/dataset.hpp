#pragma once

// Flattened views of a finalized hierarchy (entities per trainable level)
// and of an image corpus aligned to it.

#include <array>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "hierloc/feature_file.hpp"
#include "hierloc/geodesy.hpp"
#include "hierloc/hierarchy.hpp"

namespace hierloc::features {
struct SyntheticWorld;
}

namespace hierloc::data {

using Matrix = Eigen::MatrixXd;

// Trainable levels in order: country, region, subregion, city.
inline constexpr int kLevels = 4;
inline constexpr std::array<const char*, kLevels> kLevelNames = {"country", "region", "subregion", "city"};

struct LevelEntities {
  int level = 0;  // hierarchy level (2..5)
  std::vector<std::string> ids;
  std::vector<std::string> names;
  std::vector<int> parent;  // index into the previous level; -1 for countries
  std::vector<geo::GeoCoord> coords;
  Matrix features;          // n x (d_loc + d_img + d_text)

  int size() const { return static_cast<int>(ids.size()); }
  // -1 when absent.
  int find(const std::string& id) const;

  std::unordered_map<std::string, int> index_of;
};

struct EntityCatalog {
  std::array<LevelEntities, kLevels> levels;
  std::size_t d_loc = 0;
  std::size_t d_img = 0;
  std::size_t d_text = 0;

  std::size_t feature_dim() const { return d_loc + d_img + d_text; }

  // Levels in depth-first order of the (id-sorted) tree. Missing image or
  // text features become zero blocks.
  static EntityCatalog from_hierarchy(const hierarchy::EntityNode& root, std::size_t loc_scales);
};

struct ImageRecord {
  std::string image_id;
  std::array<int, kLevels> truth{};  // entity index per level
  geo::GeoCoord coords;
  bool holdout = false;
};

struct ImageSet {
  std::vector<ImageRecord> records;
  Matrix features;  // rows aligned with records
  std::int64_t skipped = 0;

  std::size_t size() const { return records.size(); }
  std::vector<int> split(bool holdout) const;
};

// Reads a metadata CSV (optional image_id and split columns; split values
// other than "train" are held out) with features from the feature column or
// the sidecar. Rows whose entity path is not in the catalog are skipped.
ImageSet load_images(const std::filesystem::path& metadata_csv, const features::FeatureFile* sidecar,
                     const EntityCatalog& catalog, const hierarchy::BuildConfig& cfg);

ImageSet images_from_world(const features::SyntheticWorld& world, const EntityCatalog& catalog);

}  // namespace hierloc::data
