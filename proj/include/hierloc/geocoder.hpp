#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace hierloc::hierarchy {

struct PlaceLabels {
  std::string country;
  std::string region;
  std::string subregion;
  std::string city;

  friend bool operator==(const PlaceLabels&, const PlaceLabels&) = default;
};

// Reverse geocoding contract: (lat, lon) -> labels, or nullopt on failure.
class GeocoderClient {
 public:
  virtual ~GeocoderClient() = default;
  virtual std::optional<PlaceLabels> reverse(double lat, double lon) = 0;
};

// Offline deterministic geocoder. Cities are grid cells of `cell_deg`;
// subregions, regions and countries are cells 4x, 16x and 64x coarser. The
// country label is an ISO2 code picked from the bundled table by the coarse
// cell index.
class GridStubGeocoder final : public GeocoderClient {
 public:
  explicit GridStubGeocoder(double cell_deg = 1.0);
  std::optional<PlaceLabels> reverse(double lat, double lon) override;

 private:
  double cell_deg_;
};

struct NominatimOptions {
  std::string base_url = "http://localhost:8080";
  std::chrono::milliseconds min_interval{1000};
  std::filesystem::path cache_path;  // empty -> in-memory cache only
  std::string user_agent = "hierloc/0.1";
  int zoom = 10;
  std::chrono::seconds timeout{10};
};

// Client for a Nominatim-compatible /reverse endpoint. Requests are spaced
// at least min_interval apart and responses (including failures) are cached
// by coordinates rounded to 1e-5 degrees.
class NominatimGeocoder final : public GeocoderClient {
 public:
  explicit NominatimGeocoder(NominatimOptions opts);
  ~NominatimGeocoder() override;

  std::optional<PlaceLabels> reverse(double lat, double lon) override;
  void flush_cache() const;
  std::size_t requests_made() const { return requests_; }

 private:
  std::optional<PlaceLabels> fetch(double lat, double lon);

  NominatimOptions opts_;
  std::map<std::string, std::optional<PlaceLabels>> cache_;
  std::chrono::steady_clock::time_point last_request_{};
  std::size_t requests_ = 0;
  mutable std::mutex mu_;
};

// Parses a Nominatim jsonv2 reverse response body.
std::optional<PlaceLabels> parse_nominatim_response(const std::string& body);

}  // namespace hierloc::hierarchy
