#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "hierloc/errors.hpp"
#include "hierloc/hierarchy_io.hpp"

using namespace hierloc::hierarchy;

namespace {

HierarchyDocument fixture_doc() {
  std::ifstream in(std::string(HIERLOC_TEST_DATA_DIR) + "/fixture3.csv");
  HierarchyBuilder b(BuildConfig{});
  b.add_csv(in);
  auto r = std::move(b).finish([](const std::string& n) { return std::vector<double>{double(n.size()), 0.25}; });
  return {r.root, r.stats, r.skips, nlohmann::json{{"dataset", "labels-provided"}}};
}

}  // namespace

TEST(HierarchyIo, RoundTripIsIdentity) {
  auto doc = fixture_doc();
  auto bytes = serialize(doc);
  auto back = deserialize(bytes);
  EXPECT_TRUE(back.root == doc.root);
  EXPECT_EQ(back.stats, doc.stats);
  EXPECT_EQ(back.skips, doc.skips);
  EXPECT_EQ(back.config, doc.config);
  EXPECT_EQ(serialize(back), bytes);
}

TEST(HierarchyIo, WorldOnly) {
  HierarchyDocument doc{make_world(), {}, {}, {}};
  finalize_features(doc.root, {});
  doc.stats = count_levels(doc.root);
  auto j = nlohmann::json::parse(serialize(doc));
  EXPECT_EQ(j["stats"]["levels"], (nlohmann::json{{"0", 1}}));
  EXPECT_EQ(j["root"]["count"], 0);
  EXPECT_TRUE(j["root"]["children"].empty());
}

TEST(HierarchyIo, TruncatedAndMalformedInput) {
  auto bytes = serialize(fixture_doc());
  EXPECT_THROW(deserialize(bytes.substr(0, bytes.size() / 2)), hierloc::ParseError);
  EXPECT_THROW(deserialize("[]"), hierloc::ParseError);

  auto j = nlohmann::json::parse(bytes);
  j["root"]["children"][0]["level"] = 3;
  try {
    deserialize(j.dump());
    FAIL() << "expected ParseError";
  } catch (const hierloc::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("/root/children/0"), std::string::npos) << e.what();
  }

  auto k = nlohmann::json::parse(bytes);
  k["stats"]["levels"]["2"] = 7;
  EXPECT_THROW(deserialize(k.dump()), hierloc::ParseError);
}

TEST(HierarchyIo, FileRoundTrip) {
  auto path = std::filesystem::temp_directory_path() / "hierloc_io_test.json";
  auto doc = fixture_doc();
  save_hierarchy(path, doc);
  auto back = load_hierarchy(path);
  EXPECT_TRUE(back.root == doc.root);
  std::filesystem::remove(path);
  EXPECT_THROW(load_hierarchy(path), hierloc::ParseError);
}
