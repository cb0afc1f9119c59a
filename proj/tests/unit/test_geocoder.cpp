#include <atomic>
#include <chrono>
#include <filesystem>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "hierloc/geocoder.hpp"
#include "hierloc/hierarchy.hpp"

using namespace hierloc::hierarchy;

TEST(GridStub, DeterministicCells) {
  GridStubGeocoder g(1.0);
  auto a = g.reverse(48.8, 2.3);
  ASSERT_TRUE(a.has_value());
  EXPECT_EQ(a->city, "c138x182");
  EXPECT_EQ(a->subregion, "s34x45");
  EXPECT_EQ(a->region, "r8x11");
  EXPECT_EQ(a, g.reverse(48.8, 2.3));
  EXPECT_EQ(a->country, g.reverse(48.9, 2.9)->country);
  EXPECT_TRUE(resolve_country(a->country).has_value());
  EXPECT_FALSE(g.reverse(95, 0).has_value());
}

TEST(GridStub, FeedsCoordsOnlyBuild) {
  GridStubGeocoder g(2.0);
  BuildConfig cfg;
  cfg.dataset = DatasetTag::CoordsOnly;
  std::vector<RawRecord> recs = {{"", "", "", "", 10, 10, std::nullopt}, {"", "", "", "", 10.5, 10.5, std::nullopt}};
  auto r = build_hierarchy(recs, cfg, {}, &g);
  EXPECT_EQ(r.skips.accepted, 2);
  EXPECT_EQ(r.stats.level_counts.at(5), 1);
}

TEST(Nominatim, ParseResponse) {
  auto ok = parse_nominatim_response(
      R"({"address":{"country_code":"fr","state":"Ile-de-France","county":"Paris","city":"Paris"}})");
  ASSERT_TRUE(ok.has_value());
  EXPECT_EQ(*ok, (PlaceLabels{"FR", "Ile-de-France", "Paris", "Paris"}));
  auto town = parse_nominatim_response(R"({"address":{"country_code":"de","state":"Bayern","town":"Dachau"}})");
  EXPECT_EQ(town->city, "Dachau");
  EXPECT_EQ(town->subregion, "");
  EXPECT_FALSE(parse_nominatim_response(R"({"error":"Unable to geocode"})").has_value());
  EXPECT_FALSE(parse_nominatim_response("not json").has_value());
}

TEST(Nominatim, LocalServerRateLimitAndCache) {
  httplib::Server svr;
  std::atomic<int> hits{0};
  svr.Get("/reverse", [&](const httplib::Request& req, httplib::Response& res) {
    ++hits;
    const double lat = std::stod(req.get_param_value("lat"));
    if (lat > 80) {
      res.set_content(R"({"error":"Unable to geocode"})", "application/json");
      return;
    }
    res.set_content(R"({"address":{"country_code":"jp","state":"Tokyo","city":"Shinjuku"}})", "application/json");
  });
  const int port = svr.bind_to_any_port("127.0.0.1");
  std::thread th([&] { svr.listen_after_bind(); });
  svr.wait_until_ready();

  auto cache = std::filesystem::temp_directory_path() / "hierloc_geocache_test.json";
  std::filesystem::remove(cache);
  NominatimOptions opts;
  opts.base_url = "http://127.0.0.1:" + std::to_string(port);
  opts.min_interval = std::chrono::milliseconds(150);
  opts.cache_path = cache;
  {
    NominatimGeocoder g(opts);
    const auto t0 = std::chrono::steady_clock::now();
    auto a = g.reverse(35.69, 139.70);
    auto b = g.reverse(35.70, 139.70);
    const auto elapsed = std::chrono::steady_clock::now() - t0;
    ASSERT_TRUE(a.has_value());
    EXPECT_EQ(a->country, "JP");
    EXPECT_EQ(a->city, "Shinjuku");
    EXPECT_TRUE(b.has_value());
    EXPECT_GE(elapsed, std::chrono::milliseconds(150));
    EXPECT_FALSE(g.reverse(85.0, 0.0).has_value());
    EXPECT_EQ(g.reverse(35.69, 139.70), a);
    EXPECT_EQ(g.requests_made(), 3u);
  }
  EXPECT_EQ(hits.load(), 3);
  {
    NominatimGeocoder g(opts);
    EXPECT_EQ(g.reverse(35.69, 139.70)->city, "Shinjuku");
    EXPECT_FALSE(g.reverse(85.0, 0.0).has_value());
    EXPECT_EQ(g.requests_made(), 0u);
  }
  svr.stop();
  th.join();
  std::filesystem::remove(cache);
}

TEST(Nominatim, UnreachableEndpointIsFailure) {
  NominatimOptions opts;
  opts.base_url = "http://127.0.0.1:1";
  opts.timeout = std::chrono::seconds(1);
  NominatimGeocoder g(opts);
  EXPECT_FALSE(g.reverse(1.0, 1.0).has_value());
}
