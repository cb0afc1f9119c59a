#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hierloc::hierarchy {

struct CountryInfo {
  std::string iso2;
  std::string name;
  std::string continent;

  friend bool operator==(const CountryInfo&, const CountryInfo&) = default;
};

// Bundled ISO2 -> (name, continent) table, sorted by code, with the
// continent patches applied (XK, TL, SX, VA).
const std::vector<CountryInfo>& country_table();

const CountryInfo* find_country(std::string_view iso2);

// Accepts a bare ISO2 code ("FR"), a "name_AA" suffix form ("kosovo_XK"),
// or a full country name (case-insensitive). Never throws.
std::optional<CountryInfo> resolve_country(std::string_view raw);

}  // namespace hierloc::hierarchy
