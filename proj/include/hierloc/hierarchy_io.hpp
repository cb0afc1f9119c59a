#pragma once

// Hierarchy document: UTF-8 JSON with sorted keys and children as lists.
//
// {
//   "config": {...},                       // effective build configuration
//   "format": "hierloc-hierarchy", "version": 1,
//   "root": {"children": [...], "coords": [lat, lon] | null, "count": n,
//            "id": "...", "img": [...] | null, "level": l, "name": "...",
//            "text": [...] | null},
//   "stats": {"levels": {"0": n0, ...}, "skips": {...}}
// }

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "hierloc/hierarchy.hpp"

namespace hierloc::hierarchy {

struct HierarchyDocument {
  EntityNode root;
  HierarchyStats stats;
  SkipCounters skips;
  nlohmann::json config = nlohmann::json::object();
};

nlohmann::json stats_to_json(const HierarchyStats& stats, const SkipCounters& skips);

std::string serialize(const HierarchyDocument& doc);
// Throws ParseError with the JSON path of the first offending element.
HierarchyDocument deserialize(std::string_view bytes);

void save_hierarchy(const std::filesystem::path& path, const HierarchyDocument& doc);
HierarchyDocument load_hierarchy(const std::filesystem::path& path);

}  // namespace hierloc::hierarchy
