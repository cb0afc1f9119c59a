#include "hierloc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <spdlog/spdlog.h>

#include "hierloc/errors.hpp"

namespace hierloc::training {

namespace {

constexpr std::size_t kEvalChunk = 256;

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  return x;
}

std::array<int, data::kLevels> counts(const data::EntityCatalog& c) {
  std::array<int, data::kLevels> n{};
  for (int l = 0; l < data::kLevels; ++l) n[l] = c.levels[l].size();
  return n;
}

}  // namespace

nlohmann::json EpochRecord::to_json() const {
  nlohmann::json j = {{"epoch", epoch}, {"split", "train"}, {"loss", loss}};
  return j;
}

Trainer::Trainer(RunConfig cfg, const data::EntityCatalog& catalog, const data::ImageSet& images)
    : cfg_(std::move(cfg)),
      catalog_(catalog),
      images_(images),
      model_((cfg_.validate(), cfg_.model), counts(catalog), catalog.feature_dim(),
             static_cast<std::size_t>(images.features.cols()), store_, cfg_.seed),
      loss_(cfg_.loss, store_),
      adamw_(cfg_.train.adam),
      radam_([this] {
        AdamConfig a = cfg_.train.adam;
        a.lr = cfg_.train.riemannian_lr;
        a.weight_decay = 0.0;
        return a;
      }(), cfg_.model.curvature) {
  for (int l = 0; l < data::kLevels; ++l) {
    if (catalog.levels[l].size() < 2) {
      throw ContractViolation(std::string("training needs at least two entities at level ") + data::kLevelNames[l]);
    }
  }
  if (static_cast<std::size_t>(images.features.rows()) != images.size()) {
    throw ContractViolation("image feature rows do not match image records");
  }
  for (std::size_t i = 0; i < store_.size(); ++i) {
    (store_[i].kind == ParamKind::Manifold ? manifold_idx_ : euclid_idx_).push_back(i);
  }
}

std::array<Matrix, data::kLevels> Trainer::entity_features() const {
  std::array<Matrix, data::kLevels> f;
  for (int l = 0; l < data::kLevels; ++l) f[l] = catalog_.levels[l].features;
  return f;
}

BatchResult Trainer::evaluate_batch(const std::vector<int>& rows, bool training, std::uint64_t dropout_seed,
                                    bool with_grad) const {
  if (rows.empty()) throw ContractViolation("evaluate_batch: empty batch");
  ad::Tape tape;
  const auto leaves = store_.bind(tape, with_grad);
  std::mt19937_64 rng(dropout_seed);
  const auto ent = model_.embed_entities(leaves, entity_features(), training, rng);

  Matrix phi(static_cast<Eigen::Index>(rows.size()), images_.features.cols());
  std::vector<geo::GeoCoord> coords;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    phi.row(static_cast<Eigen::Index>(i)) = images_.features.row(rows[i]);
    coords.push_back(images_.records[rows[i]].coords);
  }
  const ad::Var z = model_.embed_images(leaves, phi, training, rng);
  const ad::Var zs = model_.refine(leaves, z, ent);

  BatchResult out;
  std::vector<ad::Var> losses(data::kLevels);
  for (int l = 0; l < data::kLevels; ++l) {
    if (cfg_.loss.beta[l] == 0.0) continue;
    std::vector<int> pos;
    for (int r : rows) pos.push_back(images_.records[r].truth[l]);
    const ad::Var d = model_.distances(zs, ent.points[l], cfg_.loss.squared_distance);
    const Matrix angles = angle_matrix(coords, catalog_.levels[l].coords);
    losses[l] = loss_.level_loss(leaves, l, d, pos, angles, rng);
    out.level_loss[l] = losses[l].scalar();
  }
  const ad::Var total = total_loss(losses, cfg_.loss.beta);
  out.loss = total.scalar();
  if (with_grad && std::isfinite(out.loss)) {
    tape.backward(total);
    out.grads.reserve(leaves.size());
    for (const auto& v : leaves) out.grads.push_back(v.grad());
  }
  return out;
}

double Trainer::step(const std::vector<int>& rows) {
  const std::uint64_t seed = mix(cfg_.seed, static_cast<std::uint64_t>(steps_) + 1);
  BatchResult r;
  auto abort = [&](const std::string& why) {
    nlohmann::json diag;
    diag["reason"] = why;
    diag["step"] = steps_;
    diag["loss"] = std::isfinite(r.loss) ? nlohmann::json(r.loss) : nlohmann::json(std::to_string(r.loss));
    nlohmann::json ids = nlohmann::json::array();
    for (int i : rows) ids.push_back(images_.records[i].image_id);
    diag["image_ids"] = ids;
    nlohmann::json per = nlohmann::json::object();
    for (int l = 0; l < data::kLevels; ++l) per[data::kLevelNames[l]] = std::to_string(r.level_loss[l]);
    diag["level_loss"] = per;
    throw TrainingAborted(why, diag);
  };
  for (std::size_t i = 0; i < store_.size(); ++i) {
    if (!store_[i].value.allFinite()) abort("non-finite value in parameter " + store_[i].name);
  }
  r = evaluate_batch(rows, true, seed, true);
  if (!std::isfinite(r.loss)) abort("non-finite loss at step " + std::to_string(steps_));
  try {
    check_finite(store_, r.grads);
  } catch (const std::runtime_error& e) {
    abort(e.what());
  }
  clip_gradients(r.grads, cfg_.train.clip_norm);
  adamw_.step(store_, r.grads, euclid_idx_);
  radam_.step(store_, r.grads, manifold_idx_);
  ++steps_;
  return r.loss;
}

double Trainer::train_epoch(int epoch) {
  std::vector<int> order = images_.split(false);
  if (order.empty()) throw ContractViolation("train_epoch: no training images");
  std::mt19937_64 rng(mix(cfg_.seed ^ 0x5EEDULL, static_cast<std::uint64_t>(epoch)));
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t bs = static_cast<std::size_t>(cfg_.train.batch_size);
  double sum = 0.0;
  std::size_t batches = 0;
  for (std::size_t start = 0; start < order.size(); start += bs) {
    const std::vector<int> batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                                 order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), start + bs)));
    sum += step(batch);
    ++batches;
  }
  return sum / static_cast<double>(batches);
}

std::vector<EpochRecord> Trainer::fit(std::ostream* log) {
  std::vector<EpochRecord> records;
  const auto holdout = images_.split(true);
  const bool eval = cfg_.train.eval_every_epoch && !holdout.empty();
  auto emit_val = [&](int epoch) -> metrics::MetricsReport {
    auto rep = evaluate(holdout, static_cast<std::size_t>(cfg_.train.beam_width));
    if (log) {
      nlohmann::json j = rep.to_json();
      j["epoch"] = epoch;
      j["split"] = "val";
      double vl = 0.0;
      std::size_t n = 0;
      for (std::size_t s = 0; s < holdout.size(); s += kEvalChunk) {
        const std::vector<int> chunk(holdout.begin() + static_cast<std::ptrdiff_t>(s),
                                     holdout.begin() + static_cast<std::ptrdiff_t>(std::min(holdout.size(), s + kEvalChunk)));
        vl += evaluate_batch(chunk, false, 0, false).loss * static_cast<double>(chunk.size());
        n += chunk.size();
      }
      j["loss"] = vl / static_cast<double>(n);
      *log << j.dump() << '\n';
      log->flush();
    }
    return rep;
  };
  if (eval) emit_val(0);
  for (int e = 1; e <= cfg_.train.epochs; ++e) {
    EpochRecord rec;
    rec.epoch = e;
    rec.loss = train_epoch(e);
    spdlog::info("epoch {} mean loss {:.6f}", e, rec.loss);
    if (log) {
      *log << rec.to_json().dump() << '\n';
      log->flush();
    }
    if (eval) {
      rec.validation = emit_val(e);
      spdlog::info("epoch {} val acc country {:.4f} city {:.4f}", e, rec.validation->accuracy[0],
                   rec.validation->accuracy[3]);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

index::LevelIndices Trainer::build_indices() const {
  ad::Tape tape;
  const auto leaves = store_.bind(tape, false);
  std::mt19937_64 rng(0);
  const auto ent = model_.embed_entities(leaves, entity_features(), false, rng);
  index::LevelIndices out;
  const auto geom = model_.hyperbolic() ? index::IndexGeometry::Lorentz : index::IndexGeometry::Euclidean;
  for (int l = 0; l < data::kLevels; ++l) {
    const auto& lv = catalog_.levels[l];
    out[l] = index::LevelIndex(lv.level, geom, cfg_.model.curvature, lv.ids, lv.parent, ent.points[l].value(),
                               lv.coords);
  }
  return out;
}

Matrix Trainer::query_points(const Matrix& phi) const {
  ad::Tape tape;
  const auto leaves = store_.bind(tape, false);
  std::mt19937_64 rng(0);
  const auto ent = model_.embed_entities(leaves, entity_features(), false, rng);
  const ad::Var z = model_.embed_images(leaves, phi, false, rng);
  return model_.refine(leaves, z, ent).value();
}

Matrix Trainer::query_points(const std::vector<int>& rows) const {
  Matrix phi(static_cast<Eigen::Index>(rows.size()), images_.features.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) phi.row(static_cast<Eigen::Index>(i)) = images_.features.row(rows[i]);
  return query_points(phi);
}

std::vector<index::PredictionPath> Trainer::predict(const std::vector<int>& rows, std::size_t width) const {
  const auto indices = build_indices();
  std::vector<index::PredictionPath> out;
  out.reserve(rows.size());
  for (std::size_t s = 0; s < rows.size(); s += kEvalChunk) {
    const std::vector<int> chunk(rows.begin() + static_cast<std::ptrdiff_t>(s),
                                 rows.begin() + static_cast<std::ptrdiff_t>(std::min(rows.size(), s + kEvalChunk)));
    const Matrix q = query_points(chunk);
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
      out.push_back(index::beam_search(q.row(i).transpose(), indices, width).best);
    }
  }
  return out;
}

std::vector<metrics::Located> Trainer::truth(const std::vector<int>& rows) const {
  std::vector<metrics::Located> out;
  for (int r : rows) {
    metrics::Located t;
    for (int l = 0; l < data::kLevels; ++l) t.ids[l] = catalog_.levels[l].ids[images_.records[r].truth[l]];
    t.coords = images_.records[r].coords;
    out.push_back(std::move(t));
  }
  return out;
}

metrics::MetricsReport Trainer::evaluate(const std::vector<int>& rows, std::size_t width) const {
  const auto paths = predict(rows, width);
  std::vector<metrics::Located> pred;
  for (const auto& p : paths) pred.push_back({p.ids, p.coords});
  return metrics::evaluate(pred, truth(rows));
}

}  // namespace hierloc::training
