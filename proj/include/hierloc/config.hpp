#pragma once

// Run configuration: every hyperparameter, data path and the seed. Loaded
// from UTF-8 JSON; unknown keys are rejected with their JSON path.

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "hierloc/loss.hpp"
#include "hierloc/model.hpp"
#include "hierloc/optim.hpp"

namespace hierloc {

struct TrainConfig {
  int epochs = 5;
  int batch_size = 16;
  training::AdamConfig adam;  // Euclidean parameters
  double riemannian_lr = 2e-4;
  double clip_norm = 1.0;
  int beam_width = 10;
  bool eval_every_epoch = true;

  void validate() const;
};

struct DataConfig {
  std::string hierarchy;
  std::string metadata;
  std::string features;
  std::string checkpoint;
  std::string metrics_log;
};

struct RunConfig {
  std::uint64_t seed = 0;
  model::ModelConfig model;
  training::LossConfig loss;
  TrainConfig train;
  DataConfig data;

  void validate() const;
  nlohmann::json to_json() const;
  // Missing keys keep their defaults. Throws ConfigError.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::filesystem::path& path);
};

}  // namespace hierloc
