#include "hierloc/geocoder.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "hierloc/country_table.hpp"
#include "hierloc/errors.hpp"

namespace hierloc::hierarchy {

using nlohmann::json;

GridStubGeocoder::GridStubGeocoder(double cell_deg) : cell_deg_(cell_deg) {
  if (!(cell_deg > 0.0)) throw ContractViolation("GridStubGeocoder: cell size must be positive");
}

std::optional<PlaceLabels> GridStubGeocoder::reverse(double lat, double lon) {
  if (!std::isfinite(lat) || !std::isfinite(lon) || lat < -90.0 || lat > 90.0) return std::nullopt;
  auto cell = [&](double size, double v, double offset) {
    return static_cast<long long>(std::floor((v + offset) / size));
  };
  auto label = [&](const char* prefix, double mult) {
    return std::string(prefix) + std::to_string(cell(cell_deg_ * mult, lat, 90.0)) + "x" +
           std::to_string(cell(cell_deg_ * mult, lon, 180.0));
  };
  const auto& table = country_table();
  const long long ci = cell(cell_deg_ * 64.0, lat, 90.0);
  const long long cj = cell(cell_deg_ * 64.0, lon, 180.0);
  const auto idx = static_cast<std::size_t>((ci * 7919 + cj) % static_cast<long long>(table.size()));
  return PlaceLabels{table[idx].iso2, label("r", 16.0), label("s", 4.0), label("c", 1.0)};
}

namespace {

std::string cache_key(double lat, double lon) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5f,%.5f", lat, lon);
  return buf;
}

json labels_to_json(const std::optional<PlaceLabels>& l) {
  if (!l) return nullptr;
  return json{{"country", l->country}, {"region", l->region}, {"subregion", l->subregion}, {"city", l->city}};
}

std::string first_present(const json& obj, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    if (auto it = obj.find(k); it != obj.end() && it->is_string()) return it->get<std::string>();
  }
  return {};
}

}  // namespace

std::optional<PlaceLabels> parse_nominatim_response(const std::string& body) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || doc.contains("error")) return std::nullopt;
  auto addr = doc.find("address");
  if (addr == doc.end() || !addr->is_object()) return std::nullopt;
  PlaceLabels out;
  out.country = first_present(*addr, {"country_code"});
  for (auto& ch : out.country) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  out.region = first_present(*addr, {"state", "region", "province"});
  out.subregion = first_present(*addr, {"county", "state_district", "district"});
  out.city = first_present(*addr, {"city", "town", "village", "municipality", "hamlet"});
  if (out.country.empty()) return std::nullopt;
  return out;
}

NominatimGeocoder::NominatimGeocoder(NominatimOptions opts) : opts_(std::move(opts)) {
  if (opts_.cache_path.empty() || !std::filesystem::exists(opts_.cache_path)) return;
  std::ifstream in(opts_.cache_path);
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    spdlog::warn("geocoder cache {} unreadable; starting empty", opts_.cache_path.string());
    return;
  }
  for (auto& [k, v] : doc.items()) {
    if (v.is_null()) {
      cache_[k] = std::nullopt;
    } else {
      cache_[k] = PlaceLabels{v.value("country", ""), v.value("region", ""), v.value("subregion", ""),
                              v.value("city", "")};
    }
  }
}

NominatimGeocoder::~NominatimGeocoder() {
  try {
    flush_cache();
  } catch (const std::exception& e) {
    spdlog::warn("failed to write geocoder cache: {}", e.what());
  }
}

void NominatimGeocoder::flush_cache() const {
  std::lock_guard lock(mu_);
  if (opts_.cache_path.empty()) return;
  json doc = json::object();
  for (const auto& [k, v] : cache_) doc[k] = labels_to_json(v);
  std::ofstream out(opts_.cache_path);
  out << doc.dump(1) << '\n';
}

std::optional<PlaceLabels> NominatimGeocoder::reverse(double lat, double lon) {
  const std::string key = cache_key(lat, lon);
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto result = fetch(lat, lon);
  std::lock_guard lock(mu_);
  cache_[key] = result;
  return result;
}

std::optional<PlaceLabels> NominatimGeocoder::fetch(double lat, double lon) {
  {
    std::lock_guard lock(mu_);
    const auto now = std::chrono::steady_clock::now();
    if (requests_ > 0 && now - last_request_ < opts_.min_interval) {
      std::this_thread::sleep_for(opts_.min_interval - (now - last_request_));
    }
    last_request_ = std::chrono::steady_clock::now();
    ++requests_;
  }
  httplib::Client cli(opts_.base_url);
  cli.set_connection_timeout(opts_.timeout);
  cli.set_read_timeout(opts_.timeout);
  char path[160];
  std::snprintf(path, sizeof path, "/reverse?format=jsonv2&lat=%.6f&lon=%.6f&zoom=%d&addressdetails=1", lat, lon,
                opts_.zoom);
  auto res = cli.Get(path, {{"User-Agent", opts_.user_agent}});
  if (!res || res->status != 200) {
    spdlog::debug("reverse geocode failed for ({}, {})", lat, lon);
    return std::nullopt;
  }
  return parse_nominatim_response(res->body);
}

}  // namespace hierloc::hierarchy
