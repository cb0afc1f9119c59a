#include "hierloc/level_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "hierloc/binary_io.hpp"
#include "hierloc/errors.hpp"
#include "hierloc/kernels.hpp"
#include "hierloc/manifold.hpp"

namespace hierloc::index {

namespace {

constexpr char kMagic[4] = {'H', 'L', 'I', 'X'};
constexpr std::uint32_t kVersion = 1;
const std::vector<int> kNoChildren;

}  // namespace

Vector flip_query(const Vector& z) {
  Vector f = z;
  f[0] = -f[0];
  return f;
}

LevelIndex::LevelIndex(int level, IndexGeometry geometry, double k, std::vector<std::string> ids,
                       std::vector<int> parents, Matrix points, std::vector<geo::GeoCoord> coords)
    : level_(level),
      geometry_(geometry),
      k_(k),
      ids_(std::move(ids)),
      parents_(std::move(parents)),
      points_(std::move(points)),
      coords_(std::move(coords)) {
  const auto n = ids_.size();
  if (parents_.size() != n || coords_.size() != n || static_cast<std::size_t>(points_.rows()) != n) {
    throw ContractViolation("LevelIndex: ids, parents, coords and points disagree in size");
  }
  if (!(k_ > 0.0)) throw ContractViolation("LevelIndex: curvature must be positive");
  if (geometry_ == IndexGeometry::Lorentz) {
    const manifold::Curvature c(k_);
    if (points_.cols() < 2) throw ContractViolation("LevelIndex: Lorentz points need at least 2 columns");
    for (Eigen::Index i = 0; i < points_.rows(); ++i) {
      const Vector row = points_.row(i).transpose();
      if (!(row[0] > 0.0) || manifold::constraint_residual(row, c) > 1e-8) {
        throw ContractViolation("LevelIndex: entity " + ids_[i] + " is off the hyperboloid");
      }
    }
  }
  index_children();
}

void LevelIndex::index_children() {
  children_.clear();
  for (std::size_t i = 0; i < parents_.size(); ++i) {
    const int p = parents_[i];
    if (p < 0) continue;
    if (static_cast<std::size_t>(p) >= children_.size()) children_.resize(p + 1);
    children_[p].push_back(static_cast<int>(i));
  }
}

const std::vector<int>& LevelIndex::children_of(int parent) const {
  if (parent < 0 || static_cast<std::size_t>(parent) >= children_.size()) return kNoChildren;
  return children_[parent];
}

double LevelIndex::score(const Vector& query, int i) const {
  if (geometry_ == IndexGeometry::Lorentz) {
    return kernels::lorentz_dot(query.data(), points_.row(i).data(), query.size(), 1, points_.rows());
  }
  return -(points_.row(i).transpose() - query).squaredNorm();
}

double LevelIndex::distance(const Vector& query, int i) const {
  if (geometry_ == IndexGeometry::Lorentz) {
    const double ip = kernels::lorentz_dot(query.data(), points_.row(i).data(), query.size(), 1, points_.rows());
    return manifold::raw::distance_from_inner(ip, k_);
  }
  return (points_.row(i).transpose() - query).norm();
}

std::vector<Hit> LevelIndex::topk(const Vector& query, std::size_t k, const std::vector<int>* parent_filter) const {
  if (k == 0) throw ContractViolation("topk: k must be >= 1");
  if (query.size() != points_.cols()) throw ContractViolation("topk: query dimension mismatch");
  std::vector<Hit> hits;
  if (parent_filter == nullptr) {
    Vector s;
    if (geometry_ == IndexGeometry::Lorentz) {
      s = kernels::flipped_scores(points_, query);
    } else {
      s = -(points_.rowwise() - query.transpose()).rowwise().squaredNorm();
    }
    hits.reserve(static_cast<std::size_t>(s.size()));
    for (Eigen::Index i = 0; i < s.size(); ++i) hits.push_back({static_cast<int>(i), s[i]});
  } else {
    for (int p : *parent_filter) {
      for (int c : children_of(p)) hits.push_back({c, score(query, c)});
    }
  }
  auto better = [this](const Hit& a, const Hit& b) {
    if (a.score != b.score) return a.score > b.score;
    return ids_[a.entity] < ids_[b.entity];
  };
  const std::size_t keep = std::min(k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(), better);
  hits.resize(keep);
  return hits;
}

void LevelIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write index " + path.string());
  out.write(kMagic, 4);
  io::write_u32(out, kVersion);
  io::write_u32(out, static_cast<std::uint32_t>(level_));
  io::write_u32(out, static_cast<std::uint32_t>(geometry_));
  io::write_u64(out, static_cast<std::uint64_t>(points_.rows()));
  io::write_u32(out, static_cast<std::uint32_t>(points_.cols()));
  io::write_f64(out, k_);
  for (Eigen::Index i = 0; i < points_.rows(); ++i) {
    for (Eigen::Index j = 0; j < points_.cols(); ++j) io::write_f64(out, points_(i, j));
  }
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    io::write_string(out, ids_[i]);
    io::write_u32(out, static_cast<std::uint32_t>(parents_[i]));
    io::write_f64(out, coords_[i].lat());
    io::write_f64(out, coords_[i].lon());
  }
}

LevelIndex LevelIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open index " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw ParseError(path.string() + ": bad index magic");
  if (io::read_u32(in) != kVersion) throw ParseError(path.string() + ": unsupported index version");
  const int level = static_cast<int>(io::read_u32(in));
  const std::uint32_t geom = io::read_u32(in);
  const std::uint64_t n = io::read_u64(in);
  const std::uint32_t d = io::read_u32(in);
  const double k = io::read_f64(in);
  if (!in || geom > 1 || n > (1ULL << 32) || d == 0 || d > (1u << 20)) {
    throw ParseError(path.string() + ": bad index header");
  }
  Matrix pts(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    for (Eigen::Index j = 0; j < pts.cols(); ++j) pts(i, j) = io::read_f64(in);
  }
  std::vector<std::string> ids(n);
  std::vector<int> parents(n);
  std::vector<geo::GeoCoord> coords(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    ids[i] = io::read_string(in);
    parents[i] = static_cast<std::int32_t>(io::read_u32(in));
    const double lat = io::read_f64(in);
    const double lon = io::read_f64(in);
    if (!in) throw ParseError(path.string() + ": truncated index entity table");
    coords[i] = geo::GeoCoord(lat, lon);
  }
  try {
    return LevelIndex(level, static_cast<IndexGeometry>(geom), k, std::move(ids), std::move(parents), std::move(pts),
                      std::move(coords));
  } catch (const ContractViolation& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace hierloc::index
