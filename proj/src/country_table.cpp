#include "hierloc/country_table.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "hierloc/csv.hpp"

namespace hierloc::hierarchy {

namespace detail {
extern const char* const kCountriesCsv;
}

namespace {

// Codes the base table leaves without a continent.
const std::map<std::string, std::string, std::less<>> kContinentPatches = {
    {"XK", "Europe"},
    {"TL", "Asia"},
    {"SX", "North America"},
    {"VA", "Europe"},
};

std::vector<CountryInfo> load_table() {
  std::istringstream in(detail::kCountriesCsv);
  csv::Reader reader(in);
  std::vector<std::string> row;
  std::vector<CountryInfo> out;
  bool header = true;
  while (reader.next(row)) {
    if (header) {
      header = false;
      continue;
    }
    if (row.size() < 2 || row[0].empty()) continue;
    CountryInfo info{row[0], row[1], row.size() > 2 ? row[2] : std::string{}};
    if (auto it = kContinentPatches.find(info.iso2); it != kContinentPatches.end()) info.continent = it->second;
    if (info.continent.empty()) continue;
    out.push_back(std::move(info));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.iso2 < b.iso2; });
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string upper(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

bool is_alpha2(std::string_view s) {
  return s.size() == 2 && std::isalpha(static_cast<unsigned char>(s[0])) &&
         std::isalpha(static_cast<unsigned char>(s[1]));
}

}  // namespace

const std::vector<CountryInfo>& country_table() {
  static const std::vector<CountryInfo> table = load_table();
  return table;
}

const CountryInfo* find_country(std::string_view iso2) {
  const auto& t = country_table();
  auto it = std::lower_bound(t.begin(), t.end(), iso2, [](const CountryInfo& c, std::string_view k) { return c.iso2 < k; });
  if (it == t.end() || it->iso2 != iso2) return nullptr;
  return &*it;
}

std::optional<CountryInfo> resolve_country(std::string_view raw) {
  const std::string s = trim(raw);
  if (s.empty()) return std::nullopt;
  if (is_alpha2(s)) {
    if (const auto* c = find_country(upper(s))) return *c;
    return std::nullopt;
  }
  if (auto pos = s.rfind('_'); pos != std::string::npos) {
    const std::string suffix = s.substr(pos + 1);
    if (is_alpha2(suffix)) {
      if (const auto* c = find_country(upper(suffix))) return *c;
    }
  }
  const std::string key = upper(s);
  for (const auto& c : country_table()) {
    if (upper(c.name) == key) return c;
  }
  return std::nullopt;
}

}  // namespace hierloc::hierarchy
