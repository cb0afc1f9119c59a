#pragma once

// End-to-end wiring shared by the CLI, the acceptance runner and tests.

#include <filesystem>
#include <memory>
#include <vector>

#include "hierloc/config.hpp"
#include "hierloc/dataset.hpp"
#include "hierloc/features.hpp"
#include "hierloc/hierarchy.hpp"
#include "hierloc/hierarchy_io.hpp"
#include "hierloc/synthetic_world.hpp"
#include "hierloc/trainer.hpp"

namespace hierloc::pipeline {

hierarchy::TextProvider hashed_text_provider(std::size_t d_text, std::uint64_t seed = 0);

struct HierarchyBuildOptions {
  hierarchy::BuildConfig build;
  std::size_t text_dim = features::kDefaultTextDim;
  hierarchy::RowFilter filter;
  hierarchy::GeocoderClient* geocoder = nullptr;
};

// Streams every CSV (with an optional sidecar per CSV, matched by position)
// into one tree.
hierarchy::HierarchyDocument build_hierarchy_from_csv(const std::vector<std::filesystem::path>& csvs,
                                                      const std::vector<std::filesystem::path>& sidecars,
                                                      const HierarchyBuildOptions& opts);

// Tree from the training rows of a synthetic world.
hierarchy::BuildResult hierarchy_from_world(const features::SyntheticWorld& world, std::size_t text_dim);

// Owns everything a Trainer references.
struct Experiment {
  features::SyntheticWorld world;
  hierarchy::BuildResult tree;
  data::EntityCatalog catalog;
  data::ImageSet images;
  std::unique_ptr<training::Trainer> trainer;
};

std::unique_ptr<Experiment> make_synthetic_experiment(const features::SyntheticWorldSpec& spec, const RunConfig& cfg,
                                                      std::size_t text_dim = features::kDefaultTextDim);

// Loaded artifacts for train/eval/query on files.
struct Workspace {
  hierarchy::HierarchyDocument doc;
  data::EntityCatalog catalog;
  features::FeatureFile sidecar;
  data::ImageSet images;
  std::unique_ptr<training::Trainer> trainer;
};

std::unique_ptr<Workspace> open_workspace(const RunConfig& cfg);

}  // namespace hierloc::pipeline
