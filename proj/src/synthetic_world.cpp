#include "hierloc/synthetic_world.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "hierloc/country_table.hpp"
#include "hierloc/csv.hpp"
#include "hierloc/errors.hpp"
#include "hierloc/features.hpp"
#include "hierloc/geodesy.hpp"

namespace hierloc::features {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Point at great-circle distance `km` from (lat, lon) along `bearing` (rad).
std::pair<double, double> destination(double lat, double lon, double bearing, double km) {
  const double d = km / geo::kEarthRadiusKm;
  const double p1 = lat * kDeg;
  const double l1 = lon * kDeg;
  const double sp2 = std::sin(p1) * std::cos(d) + std::cos(p1) * std::sin(d) * std::cos(bearing);
  const double p2 = std::asin(std::clamp(sp2, -1.0, 1.0));
  const double l2 = l1 + std::atan2(std::sin(bearing) * std::sin(d) * std::cos(p1),
                                    std::cos(d) - std::sin(p1) * std::sin(p2));
  return {p2 / kDeg, geo::normalize_longitude(l2 / kDeg)};
}

// Six decimals, the precision written to the CSV, so in-memory values and
// file values agree exactly.
double round6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  double y = 0.0;
  std::from_chars(buf, buf + std::char_traits<char>::length(buf), y);
  return y;
}

std::string fmt6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

void SyntheticWorldSpec::validate() const {
  if (n_countries <= 0 || regions_per_country <= 0 || subregions_per_region <= 0 || cities_per_subregion <= 0 ||
      images_per_city <= 0) {
    throw ConfigError("synthetic world: all entity and image counts must be positive");
  }
  if (!(visual_noise >= 0.0) || !std::isfinite(visual_noise)) throw ConfigError("synthetic world: visual_noise must be >= 0");
  if (d_img == 0) throw ConfigError("synthetic world: d_img must be positive");
  if (!(region_radius_km > 0.0) || !(radius_ratio > 0.0 && radius_ratio < 1.0)) {
    throw ConfigError("synthetic world: radii must be positive with ratio in (0,1)");
  }
  if (!(holdout_fraction >= 0.0 && holdout_fraction < 1.0)) throw ConfigError("synthetic world: holdout_fraction must be in [0,1)");
  if (static_cast<std::size_t>(n_countries) > hierarchy::country_table().size()) {
    throw ConfigError("synthetic world: more countries requested than the country table holds");
  }
  if (row_count() > max_rows) {
    throw ConfigError("synthetic world: " + std::to_string(row_count()) + " rows exceed max_rows " +
                      std::to_string(max_rows));
  }
}

std::size_t SyntheticWorldSpec::row_count() const {
  // Saturating product so absurd specs fail the bound instead of overflowing.
  long double n = 1.0L;
  for (int f : {n_countries, regions_per_country, subregions_per_region, cities_per_subregion, images_per_city}) {
    n *= std::max(f, 0);
  }
  return n > 1e18L ? static_cast<std::size_t>(-1) : static_cast<std::size_t>(n);
}

SyntheticWorld generate_world(const SyntheticWorldSpec& spec) {
  spec.validate();
  SyntheticWorld w;
  w.spec = spec;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // Country codes: a seeded sample from the bundled table.
  const auto& table = hierarchy::country_table();
  std::vector<std::size_t> order(table.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> picked(order.begin(), order.begin() + spec.n_countries);
  std::sort(picked.begin(), picked.end());

  // Country centers on a Fibonacci sphere restricted to |lat| <= 60.
  const double offset = unif(rng) * 360.0;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  const int n = spec.n_countries;
  const double radii[4] = {spec.region_radius_km, spec.region_radius_km * spec.radius_ratio,
                           spec.region_radius_km * spec.radius_ratio * spec.radius_ratio,
                           spec.region_radius_km * std::pow(spec.radius_ratio, 3)};
  const int fanout[3] = {spec.regions_per_country, spec.subregions_per_region, spec.cities_per_subregion};

  auto add_children = [&](auto&& self, int parent_idx) -> void {
    const SyntheticEntity parent = w.entities[parent_idx];
    const int depth = parent.level - 2;  // 0 country, 1 region, 2 subregion
    if (depth >= 3) return;
    const int k = fanout[depth];
    const double phase = unif(rng) * 2.0 * std::numbers::pi;
    for (int i = 0; i < k; ++i) {
      const double bearing = phase + 2.0 * std::numbers::pi * i / k;
      const double dist = parent.radius_km * (0.5 + 0.5 * unif(rng));
      auto [lat, lon] = destination(parent.lat, parent.lon, bearing, dist);
      SyntheticEntity e;
      const char tag = "rsc"[depth];
      e.name = parent.level == 2 ? parent.id + tag + std::to_string(i) : parent.name + tag + std::to_string(i);
      e.id = parent.id + ":" + e.name;
      e.level = parent.level + 1;
      e.parent = parent_idx;
      e.lat = lat;
      e.lon = lon;
      e.radius_km = radii[depth + 1];
      w.entities.push_back(e);
      self(self, static_cast<int>(w.entities.size()) - 1);
    }
  };

  for (int c = 0; c < n; ++c) {
    const double z = n == 1 ? 0.0 : 1.0 - 2.0 * (c + 0.5) / n;
    SyntheticEntity e;
    e.id = table[picked[c]].iso2;
    e.name = e.id;
    e.level = 2;
    e.lat = std::asin(z) / kDeg * (60.0 / 90.0);
    e.lon = geo::normalize_longitude(offset + golden * c / kDeg);
    e.radius_km = radii[0];
    w.entities.push_back(e);
    add_children(add_children, static_cast<int>(w.entities.size()) - 1);
  }

  SyntheticImageEncoder encoder(spec.d_img, spec.seed);
  const int per_city = spec.images_per_city;
  const int n_hold = std::min(per_city - 1, static_cast<int>(std::floor(per_city * spec.holdout_fraction)));
  std::vector<float> row(spec.d_img);
  std::size_t counter = 0;
  for (std::size_t ci = 0; ci < w.entities.size(); ++ci) {
    const auto& city = w.entities[ci];
    if (city.level != 5) continue;
    std::array<int, 4> chain{};
    for (int idx = static_cast<int>(ci), l = 3; idx >= 0; idx = w.entities[idx].parent, --l) chain[l] = idx;
    std::vector<bool> hold(per_city, false);
    for (int j = 0; j < n_hold; ++j) hold[j] = true;
    std::shuffle(hold.begin(), hold.end(), rng);
    for (int j = 0; j < per_city; ++j) {
      SyntheticImage img;
      char id[32];
      std::snprintf(id, sizeof id, "img%07zu", counter++);
      img.image_id = id;
      img.city = static_cast<int>(ci);
      for (int l = 0; l < 4; ++l) {
        img.ids[l] = w.entities[chain[l]].id;
        img.names[l] = w.entities[chain[l]].name;
      }
      const double bearing = unif(rng) * 2.0 * std::numbers::pi;
      const double dist = radii[3] * unif(rng);
      auto [lat, lon] = destination(city.lat, city.lon, bearing, dist);
      img.lat = round6(lat);
      img.lon = round6(lon);
      img.holdout = hold[j];
      const auto f = encoder.encode(city.id, spec.visual_noise, rng);
      std::transform(f.begin(), f.end(), row.begin(), [](double x) { return static_cast<float>(x); });
      w.features.append(row);
      w.images.push_back(std::move(img));
    }
  }
  return w;
}

void write_metadata_csv(const SyntheticWorld& w, std::ostream& out) {
  csv::write_row(out, {"image_id", "country", "region", "subregion", "city", "lat", "lon", "split"});
  for (const auto& im : w.images) {
    csv::write_row(out, {im.image_id, im.names[0], im.names[1], im.names[2], im.names[3], fmt6(im.lat), fmt6(im.lon),
                         im.holdout ? "test" : "train"});
  }
}

void write_ground_truth_csv(const SyntheticWorld& w, std::ostream& out) {
  csv::write_row(out, {"image_id", "country_id", "region_id", "subregion_id", "city_id", "lat", "lon"});
  for (const auto& im : w.images) {
    csv::write_row(out, {im.image_id, im.ids[0], im.ids[1], im.ids[2], im.ids[3], fmt6(im.lat), fmt6(im.lon)});
  }
}

void write_world(const SyntheticWorld& w, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "metadata.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / "metadata.csv").string());
    write_metadata_csv(w, out);
  }
  {
    std::ofstream out(dir / "ground_truth.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / "ground_truth.csv").string());
    write_ground_truth_csv(w, out);
  }
  w.features.save(dir / "features.bin");
}

}  // namespace hierloc::features
