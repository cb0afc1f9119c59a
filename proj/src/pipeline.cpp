#include "hierloc/pipeline.hpp"

#include <fstream>

#include "hierloc/errors.hpp"

namespace hierloc::pipeline {

hierarchy::TextProvider hashed_text_provider(std::size_t d_text, std::uint64_t seed) {
  return [d_text, seed](const std::string& name) { return features::hash_text_features(name, d_text, seed); };
}

hierarchy::HierarchyDocument build_hierarchy_from_csv(const std::vector<std::filesystem::path>& csvs,
                                                      const std::vector<std::filesystem::path>& sidecars,
                                                      const HierarchyBuildOptions& opts) {
  if (!sidecars.empty() && sidecars.size() != csvs.size()) {
    throw ConfigError("give either no feature sidecars or one per input CSV");
  }
  hierarchy::HierarchyBuilder builder(opts.build, opts.geocoder);
  for (std::size_t i = 0; i < csvs.size(); ++i) {
    std::ifstream in(csvs[i], std::ios::binary);
    if (!in) throw ParseError("cannot open " + csvs[i].string());
    std::optional<features::FeatureFile> side;
    if (!sidecars.empty()) side = features::FeatureFile::load(sidecars[i]);
    builder.add_csv(in, side ? &*side : nullptr, opts.filter);
  }
  auto res = std::move(builder).finish(hashed_text_provider(opts.text_dim));
  hierarchy::HierarchyDocument doc;
  doc.root = std::move(res.root);
  doc.stats = res.stats;
  doc.skips = res.skips;
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& p : csvs) inputs.push_back(p.generic_string());
  nlohmann::json side = nlohmann::json::array();
  for (const auto& p : sidecars) side.push_back(p.generic_string());
  doc.config = {{"inputs", inputs},
                {"sidecars", side},
                {"dataset", opts.build.dataset == hierarchy::DatasetTag::CoordsOnly ? "coords-only" : "labels-provided"},
                {"na_tokens", opts.build.na_tokens},
                {"text_dim", opts.text_dim},
                {"filter", opts.filter.column.empty() ? nlohmann::json(nullptr)
                                                      : nlohmann::json{{"column", opts.filter.column},
                                                                       {"value", opts.filter.value}}}};
  return doc;
}

hierarchy::BuildResult hierarchy_from_world(const features::SyntheticWorld& world, std::size_t text_dim) {
  hierarchy::HierarchyBuilder builder(hierarchy::BuildConfig{});
  for (std::size_t i = 0; i < world.images.size(); ++i) {
    const auto& im = world.images[i];
    if (im.holdout) continue;
    hierarchy::RawRecord r;
    r.country = im.names[0];
    r.region = im.names[1];
    r.subregion = im.names[2];
    r.city = im.names[3];
    r.lat = im.lat;
    r.lon = im.lon;
    r.image_feature = world.features.row_as_double(i);
    builder.add(r);
  }
  return std::move(builder).finish(hashed_text_provider(text_dim));
}

std::unique_ptr<Experiment> make_synthetic_experiment(const features::SyntheticWorldSpec& spec, const RunConfig& cfg,
                                                      std::size_t text_dim) {
  auto ex = std::make_unique<Experiment>();
  ex->world = features::generate_world(spec);
  ex->tree = hierarchy_from_world(ex->world, text_dim);
  ex->catalog = data::EntityCatalog::from_hierarchy(ex->tree.root, cfg.model.loc_scales);
  ex->images = data::images_from_world(ex->world, ex->catalog);
  ex->trainer = std::make_unique<training::Trainer>(cfg, ex->catalog, ex->images);
  return ex;
}

std::unique_ptr<Workspace> open_workspace(const RunConfig& cfg) {
  if (cfg.data.hierarchy.empty()) throw ConfigError("data.hierarchy is required");
  if (cfg.data.metadata.empty()) throw ConfigError("data.metadata is required");
  auto ws = std::make_unique<Workspace>();
  ws->doc = hierarchy::load_hierarchy(cfg.data.hierarchy);
  ws->catalog = data::EntityCatalog::from_hierarchy(ws->doc.root, cfg.model.loc_scales);
  if (!cfg.data.features.empty()) ws->sidecar = features::FeatureFile::load(cfg.data.features);
  hierarchy::BuildConfig bc;
  ws->images = data::load_images(cfg.data.metadata, cfg.data.features.empty() ? nullptr : &ws->sidecar, ws->catalog, bc);
  if (ws->images.size() == 0) throw ConfigError("no usable images in " + cfg.data.metadata);
  ws->trainer = std::make_unique<training::Trainer>(cfg, ws->catalog, ws->images);
  return ws;
}

}  // namespace hierloc::pipeline
