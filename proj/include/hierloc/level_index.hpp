#pragma once

// Flat per-level index of entity points. Hyperbolic indices rank by the
// flipped-query dot product, which equals the Lorentz inner product and is
// monotone in geodesic distance.
//
// Snapshot layout (little-endian):
//   4 bytes  magic "HLIX"
//   u32      version (1)
//   u32      hierarchy level
//   u32      geometry (0 = Lorentz, 1 = Euclidean)
//   u64      n (entities)
//   u32      d (columns of the point matrix: ambient d+1 for Lorentz)
//   f64      K
//   f64      n*d point matrix, row-major
//   n times: u32-length-prefixed id, i32 parent index (-1 = none), f64 lat, f64 lon

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hierloc/geodesy.hpp"

namespace hierloc::index {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class IndexGeometry : std::uint32_t { Lorentz = 0, Euclidean = 1 };

struct Hit {
  int entity = -1;
  double score = 0.0;  // flipped inner product, or minus squared distance for Euclidean
};

// (-z0, z1, ..., zd)
Vector flip_query(const Vector& z);

class LevelIndex {
 public:
  LevelIndex() = default;
  // Throws ContractViolation when a Lorentz row is off the hyperboloid
  // (scale-relative residual > 1e-8) or the table sizes disagree.
  LevelIndex(int level, IndexGeometry geometry, double k, std::vector<std::string> ids, std::vector<int> parents,
             Matrix points, std::vector<geo::GeoCoord> coords);

  static LevelIndex load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  // Up to k hits in descending score order, ties by id ascending. With a
  // parent filter only children of the listed parents are eligible.
  std::vector<Hit> topk(const Vector& query, std::size_t k, const std::vector<int>* parent_filter = nullptr) const;

  // Geodesic distance (Lorentz) or Euclidean distance to entity i.
  double distance(const Vector& query, int i) const;

  int level() const { return level_; }
  IndexGeometry geometry() const { return geometry_; }
  double curvature() const { return k_; }
  int size() const { return static_cast<int>(ids_.size()); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<int>& parents() const { return parents_; }
  const std::vector<int>& children_of(int parent) const;
  const Matrix& points() const { return points_; }
  const std::vector<geo::GeoCoord>& coords() const { return coords_; }

 private:
  double score(const Vector& query, int i) const;
  void index_children();

  int level_ = 0;
  IndexGeometry geometry_ = IndexGeometry::Lorentz;
  double k_ = 1.0;
  std::vector<std::string> ids_;
  std::vector<int> parents_;
  Matrix points_;
  std::vector<geo::GeoCoord> coords_;
  std::vector<std::vector<int>> children_;
};

}  // namespace hierloc::index
