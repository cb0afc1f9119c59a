#pragma once

// Training loop, batched forward/backward, and beam-search evaluation.

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "hierloc/beam_search.hpp"
#include "hierloc/config.hpp"
#include "hierloc/dataset.hpp"
#include "hierloc/loss.hpp"
#include "hierloc/metrics.hpp"
#include "hierloc/model.hpp"
#include "hierloc/optim.hpp"

namespace hierloc::training {

// Thrown when the loss or a gradient becomes non-finite; carries a dump of
// the offending batch.
class TrainingAborted : public std::runtime_error {
 public:
  TrainingAborted(const std::string& what, nlohmann::json diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const nlohmann::json& diagnostics() const { return diagnostics_; }

 private:
  nlohmann::json diagnostics_;
};

struct BatchResult {
  double loss = 0.0;
  std::array<double, data::kLevels> level_loss{};
  std::vector<Matrix> grads;  // store order; empty when not requested
};

struct EpochRecord {
  int epoch = 0;
  double loss = 0.0;
  std::optional<metrics::MetricsReport> validation;

  nlohmann::json to_json() const;
};

class Trainer {
 public:
  Trainer(RunConfig cfg, const data::EntityCatalog& catalog, const data::ImageSet& images);

  const RunConfig& config() const { return cfg_; }
  ParameterStore& params() { return store_; }
  const ParameterStore& params() const { return store_; }
  const model::Model& model() const { return model_; }
  const GwhLoss& loss() const { return loss_; }

  // Loss (and gradients when `with_grad`) on the given image rows. Dropout
  // masks come from `dropout_seed` when training is true.
  BatchResult evaluate_batch(const std::vector<int>& rows, bool training, std::uint64_t dropout_seed,
                             bool with_grad) const;

  // One optimizer step on a batch. Returns the batch loss.
  double step(const std::vector<int>& rows);
  // One pass over the training split in a seeded order. Returns the mean batch loss.
  double train_epoch(int epoch);
  // Runs all configured epochs. Writes one JSON line per epoch to `log`.
  std::vector<EpochRecord> fit(std::ostream* log = nullptr);

  // Per-level indices from the current entity embeddings (evaluation mode).
  index::LevelIndices build_indices() const;
  // Refined query points (evaluation mode), one row per requested image.
  Matrix query_points(const std::vector<int>& rows) const;
  Matrix query_points(const Matrix& features) const;
  std::vector<index::PredictionPath> predict(const std::vector<int>& rows, std::size_t width) const;
  metrics::MetricsReport evaluate(const std::vector<int>& rows, std::size_t width) const;

  std::vector<metrics::Located> truth(const std::vector<int>& rows) const;
  std::int64_t drift_warnings() const { return radam_.drift_warnings(); }

 private:
  std::array<Matrix, data::kLevels> entity_features() const;

  RunConfig cfg_;
  const data::EntityCatalog& catalog_;
  const data::ImageSet& images_;
  ParameterStore store_;
  model::Model model_;
  GwhLoss loss_;
  AdamW adamw_;
  RiemannianAdam radam_;
  std::vector<std::size_t> euclid_idx_, manifold_idx_;
  std::int64_t steps_ = 0;
};

}  // namespace hierloc::training
