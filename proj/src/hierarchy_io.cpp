#include "hierloc/hierarchy_io.hpp"

#include <fstream>
#include <sstream>

#include "hierloc/errors.hpp"

namespace hierloc::hierarchy {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "hierloc-hierarchy";
constexpr int kVersion = 1;

json node_to_json(const EntityNode& n) {
  json j;
  j["id"] = n.id;
  j["name"] = n.name;
  j["level"] = n.level;
  j["count"] = n.count;
  j["coords"] = n.mean_coords ? json::array({n.mean_coords->lat(), n.mean_coords->lon()}) : json(nullptr);
  j["img"] = n.mean_img ? json(*n.mean_img) : json(nullptr);
  j["text"] = n.text_feature ? json(*n.text_feature) : json(nullptr);
  json kids = json::array();
  for (const auto& c : n.children) kids.push_back(node_to_json(c));
  j["children"] = std::move(kids);
  return j;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError("hierarchy document " + (path.empty() ? std::string("/") : path) + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing key '") + key + "'");
  return *it;
}

std::optional<std::vector<double>> vector_or_null(const json& v, const std::string& path) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_array()) fail(path, "expected array or null");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(path + "/" + std::to_string(i), "expected number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

EntityNode node_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected object");
  EntityNode n;
  const auto& id = member(j, "id", path);
  const auto& name = member(j, "name", path);
  const auto& level = member(j, "level", path);
  const auto& count = member(j, "count", path);
  if (!id.is_string()) fail(path + "/id", "expected string");
  if (!name.is_string()) fail(path + "/name", "expected string");
  if (!level.is_number_integer() || level.get<int>() < 0 || level.get<int>() >= kNumLevels) {
    fail(path + "/level", "expected integer level 0..5");
  }
  if (!count.is_number_integer() || count.get<std::int64_t>() < 0) fail(path + "/count", "expected count >= 0");
  n.id = id.get<std::string>();
  n.name = name.get<std::string>();
  n.level = level.get<int>();
  n.count = count.get<std::int64_t>();

  const auto& coords = member(j, "coords", path);
  if (!coords.is_null()) {
    if (!coords.is_array() || coords.size() != 2 || !coords[0].is_number() || !coords[1].is_number()) {
      fail(path + "/coords", "expected [lat, lon] or null");
    }
    try {
      n.mean_coords = geo::GeoCoord(coords[0].get<double>(), coords[1].get<double>());
    } catch (const ContractViolation& e) {
      fail(path + "/coords", e.what());
    }
  }
  n.mean_img = vector_or_null(member(j, "img", path), path + "/img");
  n.text_feature = vector_or_null(member(j, "text", path), path + "/text");

  const auto& kids = member(j, "children", path);
  if (!kids.is_array()) fail(path + "/children", "expected array");
  n.children.reserve(kids.size());
  for (std::size_t i = 0; i < kids.size(); ++i) {
    const std::string cpath = path + "/children/" + std::to_string(i);
    EntityNode c = node_from_json(kids[i], cpath);
    if (c.level != n.level + 1) fail(cpath + "/level", "child level must be parent level + 1");
    n.children.push_back(std::move(c));
  }
  return n;
}

}  // namespace

json stats_to_json(const HierarchyStats& stats, const SkipCounters& s) {
  json levels = json::object();
  for (const auto& [lvl, cnt] : stats.level_counts) levels[std::to_string(lvl)] = cnt;
  json skips = {{"rows_read", s.rows_read},         {"accepted", s.accepted},
                {"malformed_row", s.malformed_row}, {"bad_coords", s.bad_coords},
                {"unresolved_labels", s.unresolved_labels}, {"unresolved_country", s.unresolved_country},
                {"filtered", s.filtered}};
  return json{{"levels", levels}, {"skips", skips}};
}

std::string serialize(const HierarchyDocument& doc) {
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["config"] = doc.config;
  j["stats"] = stats_to_json(doc.stats, doc.skips);
  j["root"] = node_to_json(doc.root);
  return j.dump() + "\n";
}

HierarchyDocument deserialize(std::string_view bytes) {
  json j;
  try {
    j = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("hierarchy document: ") + e.what());
  }
  if (!j.is_object()) fail("", "expected object");
  const auto& fmt = member(j, "format", "");
  if (fmt != kFormat) fail("/format", "unexpected format tag");
  const auto& ver = member(j, "version", "");
  if (ver != kVersion) fail("/version", "unsupported version");

  HierarchyDocument doc;
  doc.root = node_from_json(member(j, "root", ""), "/root");
  if (doc.root.level != kWorld) fail("/root/level", "root must be level 0");
  if (auto it = j.find("config"); it != j.end()) doc.config = *it;

  const auto& stats = member(j, "stats", "");
  const auto& levels = member(stats, "levels", "/stats");
  if (!levels.is_object()) fail("/stats/levels", "expected object");
  for (auto& [k, v] : levels.items()) {
    if (!v.is_number_integer()) fail("/stats/levels/" + k, "expected integer");
    doc.stats.level_counts[std::stoi(k)] = v.get<std::int64_t>();
  }
  if (doc.stats != count_levels(doc.root)) fail("/stats/levels", "level counts disagree with the tree");
  if (auto it = stats.find("skips"); it != stats.end() && it->is_object()) {
    auto& s = doc.skips;
    s.rows_read = it->value("rows_read", std::int64_t{0});
    s.accepted = it->value("accepted", std::int64_t{0});
    s.malformed_row = it->value("malformed_row", std::int64_t{0});
    s.bad_coords = it->value("bad_coords", std::int64_t{0});
    s.unresolved_labels = it->value("unresolved_labels", std::int64_t{0});
    s.unresolved_country = it->value("unresolved_country", std::int64_t{0});
    s.filtered = it->value("filtered", std::int64_t{0});
  }
  return doc;
}

void save_hierarchy(const std::filesystem::path& path, const HierarchyDocument& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize(doc);
}

HierarchyDocument load_hierarchy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open hierarchy " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

}  // namespace hierloc::hierarchy
