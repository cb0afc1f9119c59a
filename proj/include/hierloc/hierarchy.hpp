#pragma once

// Streaming construction of the World -> continent -> country -> region ->
// subregion -> city entity tree from image metadata.

#include <array>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hierloc/country_table.hpp"
#include "hierloc/geocoder.hpp"
#include "hierloc/geodesy.hpp"

namespace hierloc::features {
class FeatureFile;
}

namespace hierloc::hierarchy {

enum Level : int { kWorld = 0, kContinent = 1, kCountry = 2, kRegion = 3, kSubregion = 4, kCity = 5 };
inline constexpr int kNumLevels = 6;
// Levels that carry trainable entities.
inline constexpr std::array<int, 4> kEntityLevels = {kCountry, kRegion, kSubregion, kCity};

std::string_view level_name(int level);

const std::vector<std::string>& default_na_tokens();
bool is_na(std::string_view s, std::span<const std::string> na_tokens);

struct ColumnMapping {
  std::size_t country = 0;
  std::size_t region = 0;
  std::size_t subregion = 0;
  std::size_t city = 0;
  std::size_t lat = 0;
  std::size_t lon = 0;
  std::optional<std::size_t> image_feature;
  // Original header names in canonical order.
  std::vector<std::string> ordered;
};

// Case-insensitive header resolution: exact, then hyphen/underscore
// tolerant, then prefix/suffix rules. Throws ConfigError naming the first
// unresolvable required field.
ColumnMapping resolve_usecols(const std::vector<std::string>& header);

// Removes punctuation, drops the literal token "County", collapses and trims
// whitespace. NA tokens map to "".
std::string sanitize(std::string_view s, std::span<const std::string> na_tokens = default_na_tokens());
std::string first_token_or(std::string_view s, std::string_view alt);

enum class DatasetTag { LabelsProvided, CoordsOnly };

DatasetTag parse_dataset_tag(std::string_view s);

std::optional<PlaceLabels> resolve_labels(double lat, double lon, const PlaceLabels& raw, DatasetTag tag,
                                          GeocoderClient* geocoder);

struct RawRecord {
  std::string country;
  std::string region;
  std::string subregion;
  std::string city;
  double lat = 0.0;
  double lon = 0.0;
  std::optional<std::vector<double>> image_feature;
};

// Fully resolved chain for one record: ids[level] and names[level].
struct EntityPath {
  std::array<std::string, kNumLevels> ids;
  std::array<std::string, kNumLevels> names;
};

struct SkipCounters {
  std::int64_t rows_read = 0;
  std::int64_t accepted = 0;
  std::int64_t malformed_row = 0;
  std::int64_t bad_coords = 0;
  std::int64_t unresolved_labels = 0;
  std::int64_t unresolved_country = 0;
  std::int64_t filtered = 0;

  friend bool operator==(const SkipCounters&, const SkipCounters&) = default;
};

struct BuildConfig {
  DatasetTag dataset = DatasetTag::LabelsProvided;
  std::vector<std::string> na_tokens = default_na_tokens();
  // 0 -> taken from the first feature vector seen.
  std::size_t img_dim = 0;
};

// Label resolution + country resolution + sanitize/fallback naming.
std::optional<EntityPath> resolve_path(const RawRecord& rec, const BuildConfig& cfg, GeocoderClient* geocoder,
                                       SkipCounters* skips = nullptr);

struct EntityNode {
  std::string id;
  std::string name;
  int level = 0;
  std::int64_t count = 0;

  // Accumulators; cleared by finalize_features.
  double lat_sum = 0.0;
  double lon_sum = 0.0;
  std::vector<double> img_sum;
  std::int64_t img_cnt = 0;

  // Finalized features.
  std::optional<geo::GeoCoord> mean_coords;
  std::optional<std::vector<double>> mean_img;
  std::optional<std::vector<double>> text_feature;

  std::vector<EntityNode> children;
  std::unordered_map<std::string, std::size_t> child_index;  // build-time only

  EntityNode* find_child(std::string_view child_id);
  const EntityNode* find_child(std::string_view child_id) const;
};

bool operator==(const EntityNode& a, const EntityNode& b);

struct HierarchyStats {
  std::map<int, std::int64_t> level_counts;

  friend bool operator==(const HierarchyStats&, const HierarchyStats&) = default;
};

using TextProvider = std::function<std::vector<double>(const std::string& name)>;

EntityNode make_world();
EntityNode& get_or_create_child(EntityNode& parent, const std::string& id, const std::string& name, int level);
void accumulate(EntityNode& node, double lat, double lon);
void accumulate_img(EntityNode& node, std::span<const double> v);

// Means (World fixed at (0,0)), text features for levels > 0, raw sums dropped.
void finalize_features(EntityNode& root, const TextProvider& text);
// Children ordered by id, build-time maps dropped.
void collapse(EntityNode& root);
HierarchyStats count_levels(const EntityNode& root);

struct BuildResult {
  EntityNode root;
  HierarchyStats stats;
  SkipCounters skips;
};

struct RowFilter {
  std::string column;  // empty -> accept all rows
  std::string value;
};

class HierarchyBuilder {
 public:
  explicit HierarchyBuilder(BuildConfig cfg, GeocoderClient* geocoder = nullptr);

  // Returns false when the record was skipped.
  bool add(const RawRecord& rec);
  // Streams one CSV file. Image features come from the feature column when
  // present, otherwise from `sidecar` keyed by data-row index.
  void add_csv(std::istream& in, const features::FeatureFile* sidecar = nullptr, const RowFilter& filter = {});

  const SkipCounters& skips() const { return skips_; }
  BuildResult finish(const TextProvider& text = {}) &&;

 private:
  BuildConfig cfg_;
  GeocoderClient* geocoder_;
  EntityNode root_;
  SkipCounters skips_;
};

BuildResult build_hierarchy(std::span<const RawRecord> records, const BuildConfig& cfg,
                            const TextProvider& text = {}, GeocoderClient* geocoder = nullptr);

// Parses a "v1;v2;..." feature cell.
std::vector<double> parse_feature_list(std::string_view cell);

// Depth-first visit in child order.
void visit(const EntityNode& root, const std::function<void(const EntityNode&, const EntityNode*)>& fn);

}  // namespace hierloc::hierarchy
