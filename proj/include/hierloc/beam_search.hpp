#pragma once

// Parent-filtered beam search over the four trainable levels.

#include <array>
#include <string>
#include <vector>

#include "hierloc/dataset.hpp"
#include "hierloc/geodesy.hpp"
#include "hierloc/level_index.hpp"

namespace hierloc::index {

struct PredictionPath {
  std::array<int, data::kLevels> entities{};
  std::array<std::string, data::kLevels> ids;
  std::array<double, data::kLevels> distances{};  // per-level distance to the query
  double score = 0.0;                              // sum of distances
  geo::GeoCoord coords;                            // city mean coordinates
};

struct BeamResult {
  PredictionPath best;
  std::vector<PredictionPath> beam;  // final beam, best first
};

using LevelIndices = std::array<LevelIndex, data::kLevels>;

// Paths ordered by score, then lexicographically by id path.
bool path_less(const PredictionPath& a, const PredictionPath& b);

// Throws std::runtime_error when every path is pruned (a childless non-leaf).
BeamResult beam_search(const Vector& query, const LevelIndices& indices, std::size_t width);

// All complete consistent paths, for exhaustive checks on small trees.
std::vector<PredictionPath> enumerate_paths(const Vector& query, const LevelIndices& indices);

}  // namespace hierloc::index
