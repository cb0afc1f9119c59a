#include "hierloc/hierarchy.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "hierloc/csv.hpp"
#include "hierloc/errors.hpp"
#include "hierloc/feature_file.hpp"

namespace hierloc::hierarchy {

std::string_view level_name(int level) {
  static constexpr std::array<std::string_view, kNumLevels> names = {"world",  "continent", "country",
                                                                     "region", "subregion", "city"};
  if (level < 0 || level >= kNumLevels) throw ContractViolation("level out of range");
  return names[static_cast<std::size_t>(level)];
}

const std::vector<std::string>& default_na_tokens() {
  static const std::vector<std::string> tokens = {"", "NA", "NaN", "null", "None"};
  return tokens;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::string strip_separators(std::string_view s) {
  std::string out;
  for (char ch : s) {
    if (ch == '-' || ch == '_' || ch == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  return out;
}

std::string_view trim_view(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct FieldRule {
  const char* canonical;
  std::vector<std::string> aliases;   // compared after separator stripping
  std::vector<std::string> affixes;   // prefix or suffix of the stripped header
  std::vector<std::string> excluded_prefixes;
  bool required;
};

const std::vector<FieldRule>& field_rules() {
  static const std::vector<FieldRule> rules = {
      {"country", {"countrycode", "countryname"}, {"country"}, {}, true},
      {"region", {}, {"region"}, {"sub"}, true},
      {"subregion", {}, {"subregion"}, {}, true},
      {"city", {}, {"city"}, {}, true},
      {"lat", {"latitude"}, {"lat"}, {}, true},
      {"lon", {"longitude", "lng", "long"}, {"lon", "lng"}, {}, true},
      {"image_feature", {"imagefeature", "embedding", "imgemb", "features", "feature"}, {"emb", "feat"}, {}, false},
  };
  return rules;
}

bool affix_match(const std::string& h, const FieldRule& rule) {
  for (const auto& ex : rule.excluded_prefixes) {
    if (h.starts_with(ex)) return false;
  }
  for (const auto& a : rule.affixes) {
    if (h.starts_with(a) || h.ends_with(a)) return true;
  }
  return false;
}

}  // namespace

bool is_na(std::string_view s, std::span<const std::string> na_tokens) {
  const auto t = trim_view(s);
  return std::any_of(na_tokens.begin(), na_tokens.end(), [&](const std::string& tok) { return t == tok; });
}

ColumnMapping resolve_usecols(const std::vector<std::string>& header) {
  if (header.empty()) throw ConfigError("empty CSV header");
  const auto& rules = field_rules();
  std::vector<std::optional<std::size_t>> chosen(rules.size());
  std::vector<bool> claimed(header.size(), false);
  std::vector<std::string> lowered;
  std::vector<std::string> stripped;
  for (const auto& h : header) {
    lowered.push_back(lower(trim_view(h)));
    stripped.push_back(strip_separators(trim_view(h)));
  }

  auto pass = [&](auto&& matches) {
    for (std::size_t f = 0; f < rules.size(); ++f) {
      if (chosen[f]) continue;
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (!claimed[i] && matches(rules[f], i)) {
          chosen[f] = i;
          claimed[i] = true;
          break;
        }
      }
    }
  };
  pass([&](const FieldRule& r, std::size_t i) { return lowered[i] == r.canonical; });
  pass([&](const FieldRule& r, std::size_t i) {
    if (stripped[i] == strip_separators(r.canonical)) return true;
    return std::find(r.aliases.begin(), r.aliases.end(), stripped[i]) != r.aliases.end();
  });
  pass([&](const FieldRule& r, std::size_t i) { return affix_match(stripped[i], r); });

  for (std::size_t f = 0; f < rules.size(); ++f) {
    if (rules[f].required && !chosen[f]) {
      throw ConfigError(std::string("missing required column: ") + rules[f].canonical);
    }
  }
  ColumnMapping m;
  m.country = *chosen[0];
  m.region = *chosen[1];
  m.subregion = *chosen[2];
  m.city = *chosen[3];
  m.lat = *chosen[4];
  m.lon = *chosen[5];
  m.image_feature = chosen[6];
  for (std::size_t f = 0; f < rules.size(); ++f) {
    if (chosen[f]) m.ordered.push_back(header[*chosen[f]]);
  }
  return m;
}

std::string sanitize(std::string_view s, std::span<const std::string> na_tokens) {
  if (is_na(s, na_tokens)) return {};
  std::string cleaned;
  cleaned.reserve(s.size());
  for (char ch : s) {
    if (std::ispunct(static_cast<unsigned char>(ch))) continue;
    cleaned.push_back(ch);
  }
  // Re-join whitespace-separated tokens, dropping the literal "County".
  std::string out;
  std::size_t i = 0;
  while (i < cleaned.size()) {
    while (i < cleaned.size() && std::isspace(static_cast<unsigned char>(cleaned[i]))) ++i;
    std::size_t j = i;
    while (j < cleaned.size() && !std::isspace(static_cast<unsigned char>(cleaned[j]))) ++j;
    if (j > i) {
      std::string_view tok(cleaned.data() + i, j - i);
      if (tok != "County") {
        if (!out.empty()) out.push_back(' ');
        out.append(tok);
      }
    }
    i = j;
  }
  return out;
}

std::string first_token_or(std::string_view s, std::string_view alt) {
  if (s.empty()) return std::string(alt);
  auto is_sep = [](char ch) { return ch == '_' || std::isspace(static_cast<unsigned char>(ch)); };
  std::size_t i = 0;
  while (i < s.size() && is_sep(s[i])) ++i;
  if (i == s.size()) return std::string(alt);
  std::size_t j = i;
  while (j < s.size() && !is_sep(s[j])) ++j;
  return std::string(s.substr(i, j - i));
}

DatasetTag parse_dataset_tag(std::string_view s) {
  if (s == "labels" || s == "labels-provided" || s == "osv5m") return DatasetTag::LabelsProvided;
  if (s == "coords" || s == "coords-only" || s == "mediaeval16") return DatasetTag::CoordsOnly;
  throw ConfigError("unknown dataset tag '" + std::string(s) + "' (expected labels-provided|coords-only)");
}

std::optional<PlaceLabels> resolve_labels(double lat, double lon, const PlaceLabels& raw, DatasetTag tag,
                                          GeocoderClient* geocoder) {
  if (tag == DatasetTag::LabelsProvided) return raw;
  if (geocoder == nullptr) return std::nullopt;
  try {
    return geocoder->reverse(lat, lon);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<EntityPath> resolve_path(const RawRecord& rec, const BuildConfig& cfg, GeocoderClient* geocoder,
                                       SkipCounters* skips) {
  const PlaceLabels raw{rec.country, rec.region, rec.subregion, rec.city};
  auto labels = resolve_labels(rec.lat, rec.lon, raw, cfg.dataset, geocoder);
  if (!labels) {
    if (skips) ++skips->unresolved_labels;
    return std::nullopt;
  }
  // The country column is not NA-filtered: "NA" is Namibia's ISO2 code.
  auto country = resolve_country(labels->country);
  if (!country) {
    if (skips) ++skips->unresolved_country;
    return std::nullopt;
  }
  const std::string region = first_token_or(sanitize(labels->region, cfg.na_tokens), country->name + " region");
  const std::string subregion = first_token_or(sanitize(labels->subregion, cfg.na_tokens), region + " subregion");
  const std::string city = first_token_or(sanitize(labels->city, cfg.na_tokens), subregion + " city");

  EntityPath p;
  p.ids[kWorld] = "World";
  p.names[kWorld] = "World";
  p.ids[kContinent] = country->continent;
  p.names[kContinent] = country->continent;
  p.ids[kCountry] = country->iso2;
  p.names[kCountry] = country->name;
  p.ids[kRegion] = country->iso2 + ":" + region;
  p.names[kRegion] = region;
  p.ids[kSubregion] = p.ids[kRegion] + ":" + subregion;
  p.names[kSubregion] = subregion;
  p.ids[kCity] = p.ids[kSubregion] + ":" + city;
  p.names[kCity] = city;
  return p;
}

EntityNode* EntityNode::find_child(std::string_view child_id) {
  return const_cast<EntityNode*>(std::as_const(*this).find_child(child_id));
}

const EntityNode* EntityNode::find_child(std::string_view child_id) const {
  if (!child_index.empty()) {
    auto it = child_index.find(std::string(child_id));
    return it == child_index.end() ? nullptr : &children[it->second];
  }
  auto it = std::lower_bound(children.begin(), children.end(), child_id,
                             [](const EntityNode& n, std::string_view k) { return n.id < k; });
  if (it != children.end() && it->id == child_id) return &*it;
  // Unsorted fallback (trees assembled by hand).
  for (const auto& c : children) {
    if (c.id == child_id) return &c;
  }
  return nullptr;
}

bool operator==(const EntityNode& a, const EntityNode& b) {
  return a.id == b.id && a.name == b.name && a.level == b.level && a.count == b.count && a.lat_sum == b.lat_sum &&
         a.lon_sum == b.lon_sum && a.img_sum == b.img_sum && a.img_cnt == b.img_cnt &&
         a.mean_coords == b.mean_coords && a.mean_img == b.mean_img && a.text_feature == b.text_feature &&
         a.children == b.children;
}

EntityNode make_world() {
  EntityNode w;
  w.id = "World";
  w.name = "World";
  w.level = kWorld;
  return w;
}

EntityNode& get_or_create_child(EntityNode& parent, const std::string& id, const std::string& name, int level) {
  if (auto it = parent.child_index.find(id); it != parent.child_index.end()) return parent.children[it->second];
  EntityNode child;
  child.id = id;
  child.name = name;
  child.level = level;
  parent.child_index.emplace(id, parent.children.size());
  parent.children.push_back(std::move(child));
  return parent.children.back();
}

void accumulate(EntityNode& node, double lat, double lon) {
  ++node.count;
  if (std::isfinite(lat) && std::isfinite(lon)) {
    node.lat_sum += lat;
    node.lon_sum += lon;
  }
}

void accumulate_img(EntityNode& node, std::span<const double> v) {
  if (node.img_sum.empty()) {
    node.img_sum.assign(v.size(), 0.0);
  } else if (node.img_sum.size() != v.size()) {
    throw ContractViolation("accumulate_img: feature dimension mismatch at " + node.id);
  }
  for (std::size_t i = 0; i < v.size(); ++i) node.img_sum[i] += v[i];
  ++node.img_cnt;
}

void finalize_features(EntityNode& n, const TextProvider& text) {
  if (n.img_cnt > 0) {
    std::vector<double> mean(n.img_sum.size());
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] = n.img_sum[i] / static_cast<double>(n.img_cnt);
    n.mean_img = std::move(mean);
  } else {
    n.mean_img.reset();
  }
  if (n.level > 0 && text) {
    n.text_feature = text(n.name);
  } else {
    n.text_feature.reset();
  }
  if (n.level == kWorld) {
    n.mean_coords = geo::GeoCoord(0.0, 0.0);
  } else if (n.count > 0) {
    const double c = static_cast<double>(n.count);
    n.mean_coords = geo::GeoCoord(n.lat_sum / c, n.lon_sum / c);
  } else {
    n.mean_coords.reset();
  }
  n.lat_sum = 0.0;
  n.lon_sum = 0.0;
  n.img_sum.clear();
  n.img_sum.shrink_to_fit();
  n.img_cnt = 0;
  for (auto& c : n.children) finalize_features(c, text);
}

void collapse(EntityNode& n) {
  n.child_index.clear();
  std::sort(n.children.begin(), n.children.end(), [](const EntityNode& a, const EntityNode& b) { return a.id < b.id; });
  for (auto& c : n.children) collapse(c);
}

HierarchyStats count_levels(const EntityNode& root) {
  HierarchyStats s;
  visit(root, [&](const EntityNode& n, const EntityNode*) { ++s.level_counts[n.level]; });
  return s;
}

void visit(const EntityNode& root, const std::function<void(const EntityNode&, const EntityNode*)>& fn) {
  struct Frame {
    const EntityNode* node;
    const EntityNode* parent;
  };
  std::vector<Frame> stack{{&root, nullptr}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    fn(*f.node, f.parent);
    for (auto it = f.node->children.rbegin(); it != f.node->children.rend(); ++it) stack.push_back({&*it, f.node});
  }
}

std::vector<double> parse_feature_list(std::string_view cell) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i <= cell.size()) {
    std::size_t j = cell.find(';', i);
    if (j == std::string_view::npos) j = cell.size();
    const auto tok = trim_view(cell.substr(i, j - i));
    if (!tok.empty()) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError("bad feature value '" + std::string(tok) + "'");
      }
      out.push_back(v);
    }
    i = j + 1;
  }
  return out;
}

HierarchyBuilder::HierarchyBuilder(BuildConfig cfg, GeocoderClient* geocoder)
    : cfg_(std::move(cfg)), geocoder_(geocoder), root_(make_world()) {}

bool HierarchyBuilder::add(const RawRecord& rec) {
  ++skips_.rows_read;
  if (!std::isfinite(rec.lat) || !std::isfinite(rec.lon) || rec.lat < -90.0 || rec.lat > 90.0 ||
      rec.lon < -180.0 || rec.lon > 180.0) {
    ++skips_.bad_coords;
    return false;
  }
  auto path = resolve_path(rec, cfg_, geocoder_, &skips_);
  if (!path) return false;

  const std::vector<double>* feat = nullptr;
  if (rec.image_feature && !rec.image_feature->empty()) {
    if (cfg_.img_dim == 0) cfg_.img_dim = rec.image_feature->size();
    if (rec.image_feature->size() != cfg_.img_dim) {
      throw ContractViolation("image feature dimension " + std::to_string(rec.image_feature->size()) +
                              " does not match configured " + std::to_string(cfg_.img_dim));
    }
    feat = &*rec.image_feature;
  }

  EntityNode* u = &root_;
  for (int level = 0; level < kNumLevels; ++level) {
    if (level > 0) u = &get_or_create_child(*u, path->ids[level], path->names[level], level);
    accumulate(*u, rec.lat, rec.lon);
    if (feat) accumulate_img(*u, *feat);
  }
  ++skips_.accepted;
  return true;
}

using csv::parse_double;

void HierarchyBuilder::add_csv(std::istream& in, const features::FeatureFile* sidecar, const RowFilter& filter) {
  csv::Reader reader(in);
  std::vector<std::string> header;
  if (!reader.next(header)) throw ParseError("csv: missing header row");
  const ColumnMapping m = resolve_usecols(header);
  std::optional<std::size_t> filter_col;
  if (!filter.column.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (lower(trim_view(header[i])) == lower(filter.column)) filter_col = i;
    }
    if (!filter_col) throw ConfigError("filter column '" + filter.column + "' not in header");
  }

  std::vector<std::string> row;
  std::size_t data_row = 0;
  while (reader.next(row)) {
    const std::size_t idx = data_row++;
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    if (row.size() != header.size()) {
      ++skips_.rows_read;
      ++skips_.malformed_row;
      continue;
    }
    if (filter_col && trim_view(row[*filter_col]) != filter.value) {
      ++skips_.filtered;
      continue;
    }
    RawRecord rec;
    rec.country = row[m.country];
    rec.region = row[m.region];
    rec.subregion = row[m.subregion];
    rec.city = row[m.city];
    if (!parse_double(row[m.lat], rec.lat) || !parse_double(row[m.lon], rec.lon)) {
      ++skips_.rows_read;
      ++skips_.bad_coords;
      continue;
    }
    if (m.image_feature && !is_na(row[*m.image_feature], cfg_.na_tokens)) {
      rec.image_feature = parse_feature_list(row[*m.image_feature]);
    } else if (sidecar != nullptr) {
      if (idx >= sidecar->rows()) throw ParseError("feature sidecar has fewer rows than the CSV");
      rec.image_feature = sidecar->row_as_double(idx);
    }
    add(rec);
  }
}

BuildResult HierarchyBuilder::finish(const TextProvider& text) && {
  finalize_features(root_, text);
  collapse(root_);
  BuildResult out;
  out.stats = count_levels(root_);
  out.root = std::move(root_);
  out.skips = skips_;
  return out;
}

BuildResult build_hierarchy(std::span<const RawRecord> records, const BuildConfig& cfg, const TextProvider& text,
                            GeocoderClient* geocoder) {
  HierarchyBuilder b(cfg, geocoder);
  for (const auto& r : records) b.add(r);
  return std::move(b).finish(text);
}

}  // namespace hierloc::hierarchy
