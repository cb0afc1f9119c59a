#pragma once

// Checkpoint container (little-endian):
//   4 bytes  magic "HLCK"
//   u32      version (1)
//   u32      config JSON length, then UTF-8 bytes
//   u32      tensor count
//   per tensor: u32-length-prefixed name, u8 kind (0 Euclidean, 1 manifold),
//               u32 rows, u32 cols, f64 payload row-major

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "hierloc/params.hpp"

namespace hierloc {

struct Checkpoint {
  nlohmann::json config;
  std::vector<Parameter> tensors;
};

void save_checkpoint(const std::filesystem::path& path, const ParameterStore& store, const nlohmann::json& config);
Checkpoint read_checkpoint(const std::filesystem::path& path);
// Copies tensors into `store`. Throws ContractViolation on a missing, extra,
// mis-shaped or mis-tagged tensor.
void load_into(const Checkpoint& ckpt, ParameterStore& store);

}  // namespace hierloc
