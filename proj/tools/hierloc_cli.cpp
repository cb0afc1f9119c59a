// hierloc command-line tool.
//
// Exit codes: 0 success, 1 runtime failure, 2 configuration or validation
// failure. Log verbosity comes from HIERLOC_LOG (trace, debug, info, warn,
// error, off); logs go to stderr.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "hierloc/checkpoint.hpp"
#include "hierloc/errors.hpp"
#include "hierloc/gradcheck.hpp"
#include "hierloc/pipeline.hpp"

using namespace hierloc;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("hierloc");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("HIERLOC_LOG")) {
    const auto lvl = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept that when asked for.
    if (lvl != spdlog::level::off || std::string(env) == "off") spdlog::set_level(lvl);
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// ---------------------------------------------------------------- build-hierarchy

struct BuildArgs {
  std::vector<std::string> csvs;
  std::vector<std::string> sidecars;
  std::string out;
  std::string dataset = "labels-provided";
  std::size_t text_dim = features::kDefaultTextDim;
  std::string filter;
  double grid_geocoder = 0.0;
  std::string nominatim;
  std::string geocode_cache;
};

int cmd_build_hierarchy(const BuildArgs& a) {
  pipeline::HierarchyBuildOptions opts;
  opts.build.dataset = hierarchy::parse_dataset_tag(a.dataset);
  opts.text_dim = a.text_dim;
  if (!a.filter.empty()) {
    const auto eq = a.filter.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--filter expects column=value");
    opts.filter = {a.filter.substr(0, eq), a.filter.substr(eq + 1)};
  }
  std::unique_ptr<hierarchy::GeocoderClient> geocoder;
  if (a.grid_geocoder > 0) {
    geocoder = std::make_unique<hierarchy::GridStubGeocoder>(a.grid_geocoder);
  } else if (!a.nominatim.empty()) {
    hierarchy::NominatimOptions no;
    no.base_url = a.nominatim;
    no.cache_path = a.geocode_cache;
    geocoder = std::make_unique<hierarchy::NominatimGeocoder>(no);
  }
  opts.geocoder = geocoder.get();
  std::vector<fs::path> csvs(a.csvs.begin(), a.csvs.end()), sides(a.sidecars.begin(), a.sidecars.end());
  auto doc = pipeline::build_hierarchy_from_csv(csvs, sides, opts);
  hierarchy::save_hierarchy(a.out, doc);
  std::cout << hierarchy::stats_to_json(doc.stats, doc.skips).dump(2) << std::endl;
  return 0;
}

// ---------------------------------------------------------------- gen-synthetic

int cmd_gen_synthetic(const features::SyntheticWorldSpec& spec, const std::string& out) {
  spec.validate();
  const auto world = features::generate_world(spec);
  features::write_world(world, out);
  spdlog::info("wrote {} rows to {}", world.images.size(), out);
  std::cout << json{{"rows", world.images.size()}, {"entities", world.entities.size()}, {"dir", out}}.dump()
            << std::endl;
  return 0;
}

// ---------------------------------------------------------------- train / eval / query

struct RunArgs {
  std::string config;
  std::string hierarchy, metadata, features, checkpoint, log;
  std::optional<int> epochs, beam_width, batch_size;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda, tau, lr, riemannian_lr, curvature;
  std::string manifold, kernel;
  bool no_squared = false;
};

void apply(RunConfig& c, const RunArgs& a) {
  if (!a.hierarchy.empty()) c.data.hierarchy = a.hierarchy;
  if (!a.metadata.empty()) c.data.metadata = a.metadata;
  if (!a.features.empty()) c.data.features = a.features;
  if (!a.checkpoint.empty()) c.data.checkpoint = a.checkpoint;
  if (!a.log.empty()) c.data.metrics_log = a.log;
  if (a.epochs) c.train.epochs = *a.epochs;
  if (a.beam_width) c.train.beam_width = *a.beam_width;
  if (a.batch_size) c.train.batch_size = *a.batch_size;
  if (a.seed) c.seed = *a.seed;
  if (a.lambda) c.loss.lambda = *a.lambda;
  if (a.tau) c.loss.tau = *a.tau;
  if (a.lr) c.train.adam.lr = c.train.riemannian_lr = *a.lr;
  if (a.riemannian_lr) c.train.riemannian_lr = *a.riemannian_lr;
  if (a.curvature) c.model.curvature = *a.curvature;
  if (!a.manifold.empty()) c.model.geometry = model::parse_geometry(a.manifold);
  if (!a.kernel.empty()) c.loss.kernel = geo::parse_kernel(a.kernel);
  if (a.no_squared) c.loss.squared_distance = false;
  c.validate();
}

int cmd_train(const RunArgs& a) {
  RunConfig cfg = a.config.empty() ? RunConfig{} : RunConfig::load(a.config);
  apply(cfg, a);
  if (cfg.data.checkpoint.empty()) throw ConfigError("data.checkpoint (or --checkpoint) is required");
  const json effective = cfg.to_json();
  std::cout << effective.dump(2) << std::endl;

  auto ws = pipeline::open_workspace(cfg);
  spdlog::info("{} images ({} held out), entities per level {} / {} / {} / {}", ws->images.size(),
               ws->images.split(true).size(), ws->catalog.levels[0].size(), ws->catalog.levels[1].size(),
               ws->catalog.levels[2].size(), ws->catalog.levels[3].size());
  std::optional<std::ofstream> log;
  if (!cfg.data.metrics_log.empty()) {
    log.emplace(cfg.data.metrics_log);
    if (!*log) throw std::runtime_error("cannot write " + cfg.data.metrics_log);
    *log << json{{"split", "config"}, {"config", effective}}.dump() << '\n';
  }
  try {
    ws->trainer->fit(log ? &*log : nullptr);
  } catch (const training::TrainingAborted& e) {
    const fs::path dump = fs::path(cfg.data.checkpoint).concat(".abort.json");
    write_text(dump, e.diagnostics().dump(2));
    spdlog::error("{}; diagnostics written to {}", e.what(), dump.string());
    return 1;
  }
  save_checkpoint(cfg.data.checkpoint, ws->trainer->params(), effective);
  if (ws->trainer->drift_warnings() > 0)
    spdlog::warn("{} manifold rows drifted off the hyperboloid before reprojection", ws->trainer->drift_warnings());
  spdlog::info("checkpoint written to {}", cfg.data.checkpoint);
  return 0;
}

// Config from the checkpoint, data paths from the flags.
std::unique_ptr<pipeline::Workspace> restore(const RunArgs& a, RunConfig& cfg) {
  if (a.checkpoint.empty()) throw ConfigError("--checkpoint is required");
  if (!fs::exists(a.checkpoint)) throw std::runtime_error("checkpoint not found: " + a.checkpoint);
  const Checkpoint ck = read_checkpoint(a.checkpoint);
  cfg = RunConfig::from_json(ck.config);
  RunArgs paths;
  paths.hierarchy = a.hierarchy;
  paths.metadata = a.metadata;
  paths.features = a.features;
  paths.beam_width = a.beam_width;
  apply(cfg, paths);
  auto ws = pipeline::open_workspace(cfg);
  load_into(ck, ws->trainer->params());
  return ws;
}

int cmd_eval(const RunArgs& a, const std::string& split, const std::string& out) {
  RunConfig cfg;
  auto ws = restore(a, cfg);
  std::vector<int> rows;
  if (split == "holdout") rows = ws->images.split(true);
  else if (split == "train") rows = ws->images.split(false);
  else if (split == "all") {
    rows.resize(ws->images.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
  } else {
    throw ConfigError("--split must be holdout, train or all");
  }
  if (rows.empty()) throw ConfigError("split '" + split + "' has no images");
  const auto rep = ws->trainer->evaluate(rows, static_cast<std::size_t>(cfg.train.beam_width));
  json j = rep.to_json();
  j["split"] = split;
  j["beam_width"] = cfg.train.beam_width;
  j["config"] = cfg.to_json();
  if (!out.empty()) write_text(out, j.dump(2) + "\n");
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_query(const RunArgs& a, std::optional<std::size_t> row, const std::string& feature) {
  RunConfig cfg;
  auto ws = restore(a, cfg);
  index::Matrix phi;
  if (!feature.empty()) {
    const auto v = hierarchy::parse_feature_list(feature);
    if (static_cast<Eigen::Index>(v.size()) != ws->images.features.cols())
      throw ConfigError("--feature has " + std::to_string(v.size()) + " values, model expects " +
                        std::to_string(ws->images.features.cols()));
    phi = Eigen::Map<const Eigen::RowVectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  } else if (row) {
    if (*row >= ws->images.size()) throw ConfigError("--row out of range");
    phi = ws->images.features.row(static_cast<Eigen::Index>(*row));
  } else {
    throw ConfigError("give --row or --feature");
  }
  const auto indices = ws->trainer->build_indices();
  const index::Vector q = ws->trainer->query_points(phi).row(0).transpose();
  const auto res = index::beam_search(q, indices, static_cast<std::size_t>(cfg.train.beam_width));
  json path = json::array();
  for (int l = 0; l < data::kLevels; ++l) {
    const auto& lvl = ws->catalog.levels[l];
    const int e = res.best.entities[l];
    path.push_back({{"level", data::kLevelNames[l]},
                    {"id", lvl.ids[e]},
                    {"name", lvl.names[e]},
                    {"distance", res.best.distances[l]}});
  }
  json j = {{"path", path},
            {"score", res.best.score},
            {"lat", res.best.coords.lat()},
            {"lon", res.best.coords.lon()}};
  if (row) {
    const auto& rec = ws->images.records[*row];
    j["image_id"] = rec.image_id;
    j["true_city"] = ws->catalog.levels[3].ids[rec.truth[3]];
  }
  std::cout << j.dump(2) << std::endl;
  return 0;
}

// ---------------------------------------------------------------- check-grad

int cmd_check_grad(std::uint64_t seed, std::size_t samples, double tol) {
  features::SyntheticWorldSpec spec;
  spec.n_countries = 2;
  spec.regions_per_country = 2;
  spec.subregions_per_region = 1;
  spec.cities_per_subregion = 2;
  spec.images_per_city = 6;
  spec.visual_noise = 0.05;
  spec.d_img = 8;
  spec.seed = seed;
  RunConfig cfg;
  cfg.seed = seed;
  cfg.model.dim = 8;
  cfg.model.hidden = 8;
  cfg.model.heads = 2;
  cfg.model.loc_scales = 2;
  cfg.model.dropout = 0.0;
  auto ex = pipeline::make_synthetic_experiment(spec, cfg, 4);
  auto rows = ex->images.split(false);
  rows.resize(std::min<std::size_t>(rows.size(), 8));
  const auto rep = training::check_pipeline_gradients(*ex->trainer, rows, 1e-5, samples, seed);
  json j = rep.to_json();
  j["tolerance"] = tol;
  j["pass"] = rep.max_rel_error <= tol;
  std::cout << j.dump(2) << std::endl;
  return rep.max_rel_error <= tol ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Hierarchical image geolocation in hyperbolic space"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* b = app.add_subcommand("build-hierarchy", "Stream metadata CSVs into an entity hierarchy");
  b->add_option("--csv", build.csvs, "Metadata CSV (repeatable)")->required()->check(CLI::ExistingFile);
  b->add_option("--sidecar", build.sidecars, "Feature sidecar per CSV, in the same order")->check(CLI::ExistingFile);
  b->add_option("--out", build.out, "Hierarchy JSON output")->required();
  b->add_option("--dataset", build.dataset, "labels-provided or coords-only")->capture_default_str();
  b->add_option("--text-dim", build.text_dim, "Hashed text feature dimension")->capture_default_str();
  b->add_option("--filter", build.filter, "Keep rows where column=value");
  b->add_option("--grid-geocoder", build.grid_geocoder, "Offline grid geocoder cell size in degrees");
  b->add_option("--nominatim", build.nominatim, "Base URL of a Nominatim-compatible endpoint");
  b->add_option("--geocode-cache", build.geocode_cache, "Cache file for reverse-geocoding results");

  features::SyntheticWorldSpec spec;
  std::string gen_out;
  auto* g = app.add_subcommand("gen-synthetic", "Write a synthetic world dataset");
  g->add_option("--out", gen_out, "Output directory")->required();
  g->add_option("--countries", spec.n_countries, "")->capture_default_str();
  g->add_option("--regions", spec.regions_per_country, "Regions per country")->capture_default_str();
  g->add_option("--subregions", spec.subregions_per_region, "Subregions per region")->capture_default_str();
  g->add_option("--cities", spec.cities_per_subregion, "Cities per subregion")->capture_default_str();
  g->add_option("--images", spec.images_per_city, "Images per city")->capture_default_str();
  g->add_option("--noise", spec.visual_noise, "Visual noise")->capture_default_str();
  g->add_option("--d-img", spec.d_img, "Image feature dimension")->capture_default_str();
  g->add_option("--holdout", spec.holdout_fraction, "Held-out fraction per city")->capture_default_str();
  g->add_option("--seed", spec.seed, "")->capture_default_str();

  RunArgs run;
  auto add_data = [&](CLI::App* s) {
    s->add_option("--hierarchy", run.hierarchy, "Hierarchy JSON");
    s->add_option("--metadata", run.metadata, "Metadata CSV");
    s->add_option("--features", run.features, "Feature sidecar");
    s->add_option("--checkpoint", run.checkpoint, "Checkpoint path");
    s->add_option("--beam-width", run.beam_width, "Beam width");
  };
  auto* t = app.add_subcommand("train", "Train on a hierarchy and metadata");
  t->add_option("--config", run.config, "Run configuration JSON")->check(CLI::ExistingFile);
  add_data(t);
  t->add_option("--log", run.log, "Metrics log (JSON lines)");
  t->add_option("--epochs", run.epochs);
  t->add_option("--batch-size", run.batch_size);
  t->add_option("--seed", run.seed);
  t->add_option("--lr", run.lr, "Learning rate for both optimizers");
  t->add_option("--riemannian-lr", run.riemannian_lr, "Learning rate for the manifold parameters (after --lr)");
  t->add_option("--lambda", run.lambda, "Geo-weight strength (0 = plain InfoNCE)");
  t->add_option("--tau", run.tau, "Temperature");
  t->add_option("--curvature", run.curvature, "K");
  t->add_option("--manifold", run.manifold, "hyperbolic or euclidean");
  t->add_option("--kernel", run.kernel, "laplace, gauss or inverse");
  t->add_flag("--no-squared-distance", run.no_squared, "Use plain instead of squared distances in the loss");

  std::string split = "holdout", eval_out;
  auto* e = app.add_subcommand("eval", "Evaluate a checkpoint");
  add_data(e);
  e->add_option("--split", split, "holdout, train or all")->capture_default_str();
  e->add_option("--out", eval_out, "Write the report JSON here as well");

  std::optional<std::size_t> qrow;
  std::string qfeature;
  auto* q = app.add_subcommand("query", "Predict the path for one image");
  add_data(q);
  q->add_option("--row", qrow, "Image row of the metadata CSV");
  q->add_option("--feature", qfeature, "Image feature vector as v1;v2;...");

  std::uint64_t gc_seed = 0;
  std::size_t gc_samples = 40;
  double gc_tol = 1e-4;
  auto* c = app.add_subcommand("check-grad", "Finite-difference check of the full loss on a 2-country toy world");
  c->add_option("--seed", gc_seed, "")->capture_default_str();
  c->add_option("--samples", gc_samples, "Entries per tensor (0 = all)")->capture_default_str();
  c->add_option("--tol", gc_tol, "Maximum relative error")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*b) return cmd_build_hierarchy(build);
    if (*g) return cmd_gen_synthetic(spec, gen_out);
    if (*t) return cmd_train(run);
    if (*e) return cmd_eval(run, split, eval_out);
    if (*q) return cmd_query(run, qrow, qfeature);
    if (*c) return cmd_check_grad(gc_seed, gc_samples, gc_tol);
  } catch (const ConfigError& err) {
    spdlog::error("{}", err.what());
    return 2;
  } catch (const std::exception& err) {
    spdlog::error("{}", err.what());
    return 1;
  }
  return 1;
}
