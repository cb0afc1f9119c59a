#include "hierloc/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "hierloc/binary_io.hpp"
#include "hierloc/errors.hpp"

namespace hierloc {

namespace {

constexpr char kMagic[4] = {'H', 'L', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

std::string shape(Eigen::Index r, Eigen::Index c) { return std::to_string(r) + "x" + std::to_string(c); }

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ParameterStore& store, const nlohmann::json& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path.string());
  out.write(kMagic, 4);
  io::write_u32(out, kVersion);
  io::write_string(out, config.dump());
  io::write_u32(out, static_cast<std::uint32_t>(store.size()));
  for (const auto& p : store) {
    io::write_string(out, p.name);
    out.put(static_cast<char>(p.kind));
    io::write_u32(out, static_cast<std::uint32_t>(p.value.rows()));
    io::write_u32(out, static_cast<std::uint32_t>(p.value.cols()));
    for (Eigen::Index i = 0; i < p.value.rows(); ++i) {
      for (Eigen::Index j = 0; j < p.value.cols(); ++j) io::write_f64(out, p.value(i, j));
    }
  }
  if (!out) throw std::runtime_error("failed writing checkpoint " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open checkpoint " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw ParseError(path.string() + ": not a checkpoint");
  if (io::read_u32(in) != kVersion) throw ParseError(path.string() + ": unsupported checkpoint version");
  Checkpoint c;
  const std::string cfg = io::read_string(in, 1u << 26);
  if (!in) throw ParseError(path.string() + ": truncated config block");
  try {
    c.config = nlohmann::json::parse(cfg);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": bad config block: " + e.what());
  }
  const std::uint32_t n = io::read_u32(in);
  for (std::uint32_t t = 0; t < n && in; ++t) {
    Parameter p;
    p.name = io::read_string(in);
    const int kind = in.get();
    const std::uint32_t rows = io::read_u32(in);
    const std::uint32_t cols = io::read_u32(in);
    if (!in || kind < 0 || kind > 1 || static_cast<std::uint64_t>(rows) * cols > (1ULL << 32)) {
      throw ParseError(path.string() + ": bad tensor header");
    }
    p.kind = static_cast<ParamKind>(kind);
    p.value.resize(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i) {
      for (std::uint32_t j = 0; j < cols; ++j) p.value(i, j) = io::read_f64(in);
    }
    c.tensors.push_back(std::move(p));
  }
  if (!in) throw ParseError(path.string() + ": truncated tensor payload");
  return c;
}

void load_into(const Checkpoint& ckpt, ParameterStore& store) {
  if (ckpt.tensors.size() != store.size()) {
    throw ContractViolation("checkpoint holds " + std::to_string(ckpt.tensors.size()) + " tensors, model expects " +
                            std::to_string(store.size()));
  }
  for (const auto& t : ckpt.tensors) {
    if (!store.contains(t.name)) throw ContractViolation("checkpoint tensor " + t.name + " is not a model parameter");
    const Parameter& p = store.at(t.name);
    if (p.value.rows() != t.value.rows() || p.value.cols() != t.value.cols()) {
      throw ContractViolation("checkpoint tensor " + t.name + " has shape " + shape(t.value.rows(), t.value.cols()) +
                              ", model expects " + shape(p.value.rows(), p.value.cols()));
    }
    if (p.kind != t.kind) throw ContractViolation("checkpoint tensor " + t.name + " has the wrong manifold tag");
  }
  for (const auto& t : ckpt.tensors) store.at(t.name).value = t.value;
}

}  // namespace hierloc
