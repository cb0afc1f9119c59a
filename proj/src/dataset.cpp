#include "hierloc/dataset.hpp"

#include <fstream>

#include "hierloc/csv.hpp"
#include "hierloc/errors.hpp"
#include "hierloc/features.hpp"
#include "hierloc/synthetic_world.hpp"

namespace hierloc::data {

int LevelEntities::find(const std::string& id) const {
  auto it = index_of.find(id);
  return it == index_of.end() ? -1 : it->second;
}

EntityCatalog EntityCatalog::from_hierarchy(const hierarchy::EntityNode& root, std::size_t loc_scales) {
  EntityCatalog cat;
  cat.d_loc = 4 * loc_scales;
  hierarchy::visit(root, [&](const hierarchy::EntityNode& n, const hierarchy::EntityNode*) {
    if (n.mean_img && cat.d_img == 0) cat.d_img = n.mean_img->size();
    if (n.text_feature && cat.d_text == 0) cat.d_text = n.text_feature->size();
  });

  std::array<std::vector<const hierarchy::EntityNode*>, kLevels> nodes;
  std::array<std::vector<int>, kLevels> parents;
  // Parent index of each node, tracked along the walk.
  std::unordered_map<const hierarchy::EntityNode*, int> pos;
  hierarchy::visit(root, [&](const hierarchy::EntityNode& n, const hierarchy::EntityNode* parent) {
    if (n.level < hierarchy::kCountry) return;
    const int l = n.level - hierarchy::kCountry;
    pos[&n] = static_cast<int>(nodes[l].size());
    nodes[l].push_back(&n);
    parents[l].push_back(l == 0 ? -1 : pos.at(parent));
  });

  for (int l = 0; l < kLevels; ++l) {
    auto& lv = cat.levels[l];
    lv.level = l + hierarchy::kCountry;
    const auto n = static_cast<Eigen::Index>(nodes[l].size());
    lv.features = Matrix::Zero(n, static_cast<Eigen::Index>(cat.feature_dim()));
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& node = *nodes[l][i];
      lv.ids.push_back(node.id);
      lv.names.push_back(node.name);
      lv.parent.push_back(parents[l][i]);
      const geo::GeoCoord c = node.mean_coords.value_or(geo::GeoCoord{});
      lv.coords.push_back(c);
      lv.index_of.emplace(node.id, static_cast<int>(i));
      const auto loc = features::location_encoding(c, loc_scales);
      Eigen::Index off = 0;
      for (double v : loc) lv.features(i, off++) = v;
      if (node.mean_img) {
        if (node.mean_img->size() != cat.d_img) throw ContractViolation("entity image features differ in dimension");
        for (std::size_t k = 0; k < cat.d_img; ++k) lv.features(i, off + k) = (*node.mean_img)[k];
      }
      off += static_cast<Eigen::Index>(cat.d_img);
      if (node.text_feature) {
        if (node.text_feature->size() != cat.d_text) throw ContractViolation("entity text features differ in dimension");
        for (std::size_t k = 0; k < cat.d_text; ++k) lv.features(i, off + k) = (*node.text_feature)[k];
      }
    }
  }
  return cat;
}

std::vector<int> ImageSet::split(bool holdout) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].holdout == holdout) out.push_back(static_cast<int>(i));
  }
  return out;
}

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

ImageSet load_images(const std::filesystem::path& metadata_csv, const features::FeatureFile* sidecar,
                     const EntityCatalog& catalog, const hierarchy::BuildConfig& cfg) {
  std::ifstream in(metadata_csv, std::ios::binary);
  if (!in) throw ParseError("cannot open " + metadata_csv.string());
  csv::Reader reader(in);
  std::vector<std::string> header;
  if (!reader.next(header)) throw ParseError(metadata_csv.string() + ": missing header row");
  const auto m = hierarchy::resolve_usecols(header);
  std::optional<std::size_t> id_col, split_col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto h = lower(header[i]);
    if (h == "image_id" || h == "id") id_col = i;
    if (h == "split") split_col = i;
  }
  const std::size_t d_img = sidecar ? sidecar->dim() : catalog.d_img;

  ImageSet set;
  std::vector<std::vector<double>> feats;
  std::vector<std::string> row;
  std::size_t data_row = 0;
  while (reader.next(row)) {
    const std::size_t idx = data_row++;
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size()) {
      ++set.skipped;
      continue;
    }
    hierarchy::RawRecord rec;
    rec.country = row[m.country];
    rec.region = row[m.region];
    rec.subregion = row[m.subregion];
    rec.city = row[m.city];
    if (!csv::parse_double(row[m.lat], rec.lat) || !csv::parse_double(row[m.lon], rec.lon) || rec.lat < -90.0 ||
        rec.lat > 90.0) {
      ++set.skipped;
      continue;
    }
    std::vector<double> f;
    if (m.image_feature && !hierarchy::is_na(row[*m.image_feature], cfg.na_tokens)) {
      f = hierarchy::parse_feature_list(row[*m.image_feature]);
    } else if (sidecar) {
      if (idx >= sidecar->rows()) throw ParseError("feature sidecar has fewer rows than " + metadata_csv.string());
      f = sidecar->row_as_double(idx);
    } else {
      ++set.skipped;
      continue;
    }
    if (d_img != 0 && f.size() != d_img) {
      throw ContractViolation("image feature of row " + std::to_string(idx) + " has dimension " +
                              std::to_string(f.size()) + ", expected " + std::to_string(d_img));
    }
    auto path = hierarchy::resolve_path(rec, cfg, nullptr);
    if (!path) {
      ++set.skipped;
      continue;
    }
    ImageRecord r;
    bool ok = true;
    for (int l = 0; l < kLevels && ok; ++l) {
      r.truth[l] = catalog.levels[l].find(path->ids[l + hierarchy::kCountry]);
      ok = r.truth[l] >= 0;
    }
    if (!ok) {
      ++set.skipped;
      continue;
    }
    r.image_id = id_col ? row[*id_col] : std::to_string(idx);
    r.coords = geo::GeoCoord(rec.lat, rec.lon);
    r.holdout = split_col ? lower(row[*split_col]) != "train" : false;
    set.records.push_back(std::move(r));
    feats.push_back(std::move(f));
  }
  const Eigen::Index dim = feats.empty() ? static_cast<Eigen::Index>(d_img) : static_cast<Eigen::Index>(feats[0].size());
  set.features.resize(static_cast<Eigen::Index>(feats.size()), dim);
  for (std::size_t i = 0; i < feats.size(); ++i) {
    for (Eigen::Index k = 0; k < dim; ++k) set.features(static_cast<Eigen::Index>(i), k) = feats[i][k];
  }
  return set;
}

ImageSet images_from_world(const features::SyntheticWorld& world, const EntityCatalog& catalog) {
  ImageSet set;
  set.features.resize(static_cast<Eigen::Index>(world.images.size()), static_cast<Eigen::Index>(world.features.dim()));
  Eigen::Index out = 0;
  for (std::size_t i = 0; i < world.images.size(); ++i) {
    const auto& im = world.images[i];
    ImageRecord r;
    bool ok = true;
    for (int l = 0; l < kLevels && ok; ++l) {
      r.truth[l] = catalog.levels[l].find(im.ids[l]);
      ok = r.truth[l] >= 0;
    }
    if (!ok) {
      ++set.skipped;
      continue;
    }
    r.image_id = im.image_id;
    r.coords = geo::GeoCoord(im.lat, im.lon);
    r.holdout = im.holdout;
    const auto f = world.features.row(i);
    for (std::size_t k = 0; k < f.size(); ++k) set.features(out, static_cast<Eigen::Index>(k)) = f[k];
    ++out;
    set.records.push_back(std::move(r));
  }
  set.features.conservativeResize(out, set.features.cols());
  return set;
}

}  // namespace hierloc::data
