#include "hierloc/feature_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "hierloc/binary_io.hpp"
#include "hierloc/errors.hpp"

namespace hierloc::features {

FeatureFile::FeatureFile(std::size_t dim, std::vector<float> data) : dim_(dim), data_(std::move(data)) {
  if (dim_ == 0 && !data_.empty()) throw ContractViolation("FeatureFile: zero dimension with data");
  if (dim_ && data_.size() % dim_ != 0) throw ContractViolation("FeatureFile: data size not a multiple of dim");
}

FeatureFile FeatureFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open feature file " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kFeatureMagic, 4) != 0) throw ParseError(path.string() + ": bad feature file magic");
  const std::uint64_t rows = io::read_u64(in);
  const std::uint32_t dim = io::read_u32(in);
  if (!in) throw ParseError(path.string() + ": truncated feature header");
  if (dim == 0 && rows > 0) throw ParseError(path.string() + ": zero feature dimension");
  std::vector<float> data(static_cast<std::size_t>(rows) * dim);
  for (auto& v : data) v = io::read_f32(in);
  if (!in) throw ParseError(path.string() + ": truncated feature payload");
  return FeatureFile(dim, std::move(data));
}

void FeatureFile::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write feature file " + path.string());
  out.write(kFeatureMagic, 4);
  io::write_u64(out, rows());
  io::write_u32(out, static_cast<std::uint32_t>(dim_));
  for (float v : data_) io::write_f32(out, v);
}

std::span<const float> FeatureFile::row(std::size_t i) const {
  if (i >= rows()) throw ContractViolation("FeatureFile: row " + std::to_string(i) + " out of range");
  return {data_.data() + i * dim_, dim_};
}

std::vector<double> FeatureFile::row_as_double(std::size_t i) const {
  auto r = row(i);
  return {r.begin(), r.end()};
}

void FeatureFile::append(std::span<const float> r) {
  if (dim_ == 0) dim_ = r.size();
  if (r.size() != dim_) throw ContractViolation("FeatureFile: appended row has wrong dimension");
  data_.insert(data_.end(), r.begin(), r.end());
}

}  // namespace hierloc::features
