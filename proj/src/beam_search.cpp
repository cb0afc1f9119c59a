#include "hierloc/beam_search.hpp"

#include <algorithm>
#include <stdexcept>

#include "hierloc/errors.hpp"

namespace hierloc::index {

namespace {

// Paths hold only their first `depth` levels while the search descends.
struct Partial {
  PredictionPath path;
  int depth = 0;
};

bool partial_less(const Partial& a, const Partial& b) {
  if (a.path.score != b.path.score) return a.path.score < b.path.score;
  for (int l = 0; l < a.depth; ++l) {
    if (a.path.ids[l] != b.path.ids[l]) return a.path.ids[l] < b.path.ids[l];
  }
  return false;
}

Partial extend(const Partial& p, const LevelIndex& idx, int entity, double dist) {
  Partial q = p;
  q.path.entities[q.depth] = entity;
  q.path.ids[q.depth] = idx.ids()[entity];
  q.path.distances[q.depth] = dist;
  q.path.score += dist;
  ++q.depth;
  return q;
}

}  // namespace

bool path_less(const PredictionPath& a, const PredictionPath& b) {
  if (a.score != b.score) return a.score < b.score;
  return a.ids < b.ids;
}

BeamResult beam_search(const Vector& query, const LevelIndices& indices, std::size_t width) {
  if (width == 0) throw ContractViolation("beam_search: width must be >= 1");
  std::vector<Partial> beam;
  for (const Hit& h : indices[0].topk(query, width)) {
    beam.push_back(extend(Partial{}, indices[0], h.entity, indices[0].distance(query, h.entity)));
  }
  std::sort(beam.begin(), beam.end(), partial_less);

  for (int l = 1; l < data::kLevels; ++l) {
    const LevelIndex& idx = indices[l];
    std::vector<Partial> next;
    for (const Partial& p : beam) {
      const std::vector<int> parent{p.path.entities[l - 1]};
      // The filtered shortlist is every child; each is scored exactly.
      for (const Hit& h : idx.topk(query, static_cast<std::size_t>(idx.size()) + 1, &parent)) {
        next.push_back(extend(p, idx, h.entity, idx.distance(query, h.entity)));
      }
    }
    if (next.empty()) throw std::runtime_error("beam_search: every path was pruned at level " + std::to_string(l));
    const std::size_t keep = std::min(width, next.size());
    std::partial_sort(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(keep), next.end(), partial_less);
    next.resize(keep);
    beam = std::move(next);
  }

  BeamResult out;
  const LevelIndex& cities = indices[data::kLevels - 1];
  for (auto& p : beam) {
    p.path.coords = cities.coords()[p.path.entities[data::kLevels - 1]];
    out.beam.push_back(p.path);
  }
  out.best = out.beam.front();
  return out;
}

std::vector<PredictionPath> enumerate_paths(const Vector& query, const LevelIndices& indices) {
  std::vector<Partial> frontier;
  for (int i = 0; i < indices[0].size(); ++i) frontier.push_back(extend(Partial{}, indices[0], i, indices[0].distance(query, i)));
  for (int l = 1; l < data::kLevels; ++l) {
    std::vector<Partial> next;
    for (const Partial& p : frontier) {
      for (int c : indices[l].children_of(p.path.entities[l - 1])) {
        next.push_back(extend(p, indices[l], c, indices[l].distance(query, c)));
      }
    }
    frontier = std::move(next);
  }
  std::vector<PredictionPath> out;
  for (auto& p : frontier) {
    p.path.coords = indices[data::kLevels - 1].coords()[p.path.entities[data::kLevels - 1]];
    out.push_back(std::move(p.path));
  }
  return out;
}

}  // namespace hierloc::index
