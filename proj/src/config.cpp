#include "hierloc/config.hpp"

#include <fstream>
#include <set>

#include "hierloc/errors.hpp"

namespace hierloc {

using nlohmann::json;

void TrainConfig::validate() const {
  if (epochs < 0) throw ConfigError("train: epochs must be >= 0");
  if (batch_size <= 0) throw ConfigError("train: batch_size must be positive");
  adam.validate();
  if (!(riemannian_lr > 0.0)) throw ConfigError("train: riemannian_lr must be positive");
  if (!(clip_norm > 0.0)) throw ConfigError("train: clip_norm must be positive");
  if (beam_width <= 0) throw ConfigError("train: beam_width must be positive");
}

void RunConfig::validate() const {
  model.validate();
  loss.validate();
  train.validate();
}

json RunConfig::to_json() const {
  json j;
  j["seed"] = seed;
  j["model"] = {{"dim", model.dim},
                {"hidden", model.hidden},
                {"heads", model.heads},
                {"dropout", model.dropout},
                {"alpha_init", model.alpha_init},
                {"anchor_sigma", model.anchor_sigma},
                {"curvature", model.curvature},
                {"manifold", model::geometry_name(model.geometry)},
                {"anchor_mode", model::anchor_mode_name(model.anchor_mode)},
                {"detach_entity_context", model.detach_entity_context},
                {"attention_cap", model.attention_cap},
                {"loc_scales", model.loc_scales}};
  j["loss"] = {{"tau", loss.tau},
               {"lambda", loss.lambda},
               {"sigma", loss.sigma},
               {"kernel", geo::kernel_name(loss.kernel)},
               {"kernel_p", loss.kernel_p},
               {"beta", loss.beta},
               {"squared_distance", loss.squared_distance},
               {"learn_scalars", loss.learn_scalars},
               {"per_level_scalars", loss.per_level_scalars},
               {"negatives", loss.negatives}};
  j["train"] = {{"epochs", train.epochs},
                {"batch_size", train.batch_size},
                {"lr", train.adam.lr},
                {"beta1", train.adam.beta1},
                {"beta2", train.adam.beta2},
                {"eps", train.adam.eps},
                {"weight_decay", train.adam.weight_decay},
                {"riemannian_lr", train.riemannian_lr},
                {"clip_norm", train.clip_norm},
                {"beam_width", train.beam_width},
                {"eval_every_epoch", train.eval_every_epoch}};
  j["data"] = {{"hierarchy", data.hierarchy},
               {"metadata", data.metadata},
               {"features", data.features},
               {"checkpoint", data.checkpoint},
               {"metrics_log", data.metrics_log}};
  return j;
}

namespace {

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError("config " + path + ": expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError("config: unknown key " + path + "/" + it.key());
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: wrong type for " + path + "/" + key);
  }
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  reject_unknown(j, "", {"seed", "model", "loss", "train", "data"});
  read(j, "seed", c.seed, "");
  if (auto it = j.find("model"); it != j.end()) {
    const json& m = *it;
    reject_unknown(m, "/model",
                   {"dim", "hidden", "heads", "dropout", "alpha_init", "anchor_sigma", "curvature", "manifold",
                    "anchor_mode", "detach_entity_context", "attention_cap", "loc_scales"});
    read(m, "dim", c.model.dim, "/model");
    read(m, "hidden", c.model.hidden, "/model");
    read(m, "heads", c.model.heads, "/model");
    read(m, "dropout", c.model.dropout, "/model");
    read(m, "alpha_init", c.model.alpha_init, "/model");
    read(m, "anchor_sigma", c.model.anchor_sigma, "/model");
    read(m, "curvature", c.model.curvature, "/model");
    std::string s;
    if (m.contains("manifold")) {
      read(m, "manifold", s, "/model");
      c.model.geometry = model::parse_geometry(s);
    }
    if (m.contains("anchor_mode")) {
      read(m, "anchor_mode", s, "/model");
      c.model.anchor_mode = model::parse_anchor_mode(s);
    }
    read(m, "detach_entity_context", c.model.detach_entity_context, "/model");
    read(m, "attention_cap", c.model.attention_cap, "/model");
    read(m, "loc_scales", c.model.loc_scales, "/model");
  }
  if (auto it = j.find("loss"); it != j.end()) {
    const json& l = *it;
    reject_unknown(l, "/loss",
                   {"tau", "lambda", "sigma", "kernel", "kernel_p", "beta", "squared_distance", "learn_scalars",
                    "per_level_scalars", "negatives"});
    read(l, "tau", c.loss.tau, "/loss");
    read(l, "lambda", c.loss.lambda, "/loss");
    read(l, "sigma", c.loss.sigma, "/loss");
    if (l.contains("kernel")) {
      std::string s;
      read(l, "kernel", s, "/loss");
      try {
        c.loss.kernel = geo::parse_kernel(s);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("config /loss/kernel: ") + e.what());
      }
    }
    read(l, "kernel_p", c.loss.kernel_p, "/loss");
    read(l, "beta", c.loss.beta, "/loss");
    read(l, "squared_distance", c.loss.squared_distance, "/loss");
    read(l, "learn_scalars", c.loss.learn_scalars, "/loss");
    read(l, "per_level_scalars", c.loss.per_level_scalars, "/loss");
    read(l, "negatives", c.loss.negatives, "/loss");
  }
  if (auto it = j.find("train"); it != j.end()) {
    const json& t = *it;
    reject_unknown(t, "/train",
                   {"epochs", "batch_size", "lr", "beta1", "beta2", "eps", "weight_decay", "riemannian_lr",
                    "clip_norm", "beam_width", "eval_every_epoch"});
    read(t, "epochs", c.train.epochs, "/train");
    read(t, "batch_size", c.train.batch_size, "/train");
    read(t, "lr", c.train.adam.lr, "/train");
    read(t, "beta1", c.train.adam.beta1, "/train");
    read(t, "beta2", c.train.adam.beta2, "/train");
    read(t, "eps", c.train.adam.eps, "/train");
    read(t, "weight_decay", c.train.adam.weight_decay, "/train");
    read(t, "riemannian_lr", c.train.riemannian_lr, "/train");
    read(t, "clip_norm", c.train.clip_norm, "/train");
    read(t, "beam_width", c.train.beam_width, "/train");
    read(t, "eval_every_epoch", c.train.eval_every_epoch, "/train");
  }
  if (auto it = j.find("data"); it != j.end()) {
    const json& d = *it;
    reject_unknown(d, "/data", {"hierarchy", "metadata", "features", "checkpoint", "metrics_log"});
    read(d, "hierarchy", c.data.hierarchy, "/data");
    read(d, "metadata", c.data.metadata, "/data");
    read(d, "features", c.data.features, "/data");
    read(d, "checkpoint", c.data.checkpoint, "/data");
    read(d, "metrics_log", c.data.metrics_log, "/data");
  }
  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

}  // namespace hierloc
