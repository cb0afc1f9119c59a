#pragma once

// Feature sidecar file.
//
// Layout (all little-endian):
//   offset 0   4 bytes   magic "HLF1"
//   offset 4   uint64    row count
//   offset 12  uint32    dimension
//   offset 16  float32[row count * dimension], row-major
//
// Row i holds the feature vector of data row i of the companion CSV.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace hierloc::features {

inline constexpr char kFeatureMagic[4] = {'H', 'L', 'F', '1'};
inline constexpr std::size_t kFeatureHeaderBytes = 16;

class FeatureFile {
 public:
  FeatureFile() = default;
  FeatureFile(std::size_t dim, std::vector<float> data);

  static FeatureFile load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::size_t rows() const { return dim_ ? data_.size() / dim_ : 0; }
  std::size_t dim() const { return dim_; }
  std::span<const float> row(std::size_t i) const;
  std::vector<double> row_as_double(std::size_t i) const;

  void append(std::span<const float> row);

 private:
  std::size_t dim_ = 0;
  std::vector<float> data_;
};

}  // namespace hierloc::features
