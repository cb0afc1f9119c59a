#include <sstream>

#include <gtest/gtest.h>

#include "hierloc/csv.hpp"
#include "hierloc/errors.hpp"

using namespace hierloc::csv;

namespace {

std::vector<std::vector<std::string>> read_all(const std::string& text) {
  std::istringstream in(text);
  Reader r(in);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> f;
  while (r.next(f)) rows.push_back(f);
  return rows;
}

}  // namespace

TEST(CsvReader, PlainAndQuoted) {
  auto rows = read_all("a,b,c\n1,\"x,y\",\"he said \"\"hi\"\"\"\r\n,,\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"1", "x,y", "he said \"hi\""}));
  EXPECT_EQ(rows[2], (std::vector<std::string>{"", "", ""}));
}

TEST(CsvReader, EmbeddedNewlineAndLineNumbers) {
  std::istringstream in("h\n\"multi\nline\"\nnext\n");
  Reader r(in);
  std::vector<std::string> f;
  ASSERT_TRUE(r.next(f));
  EXPECT_EQ(r.line(), 1u);
  ASSERT_TRUE(r.next(f));
  EXPECT_EQ(f[0], "multi\nline");
  EXPECT_EQ(r.line(), 2u);
  ASSERT_TRUE(r.next(f));
  EXPECT_EQ(f[0], "next");
  EXPECT_EQ(r.line(), 4u);
  EXPECT_FALSE(r.next(f));
}

TEST(CsvReader, NoTrailingNewline) {
  auto rows = read_all("a,b\n1,2");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][1], "2");
}

TEST(CsvReader, UnterminatedQuoteThrows) {
  EXPECT_THROW(read_all("a\n\"oops\n"), hierloc::ParseError);
}

TEST(CsvWriter, RoundTrip) {
  std::vector<std::string> fields = {"plain", "with,comma", "with \"quote\"", "multi\nline", ""};
  std::ostringstream out;
  write_row(out, fields);
  auto rows = read_all(out.str());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0], fields);
  EXPECT_EQ(quote("x"), "x");
}

TEST(ParseDouble, AcceptsAndRejects) {
  double v = 0;
  EXPECT_TRUE(parse_double(" 48.85 ", v));
  EXPECT_DOUBLE_EQ(v, 48.85);
  EXPECT_TRUE(parse_double("+2.5", v));
  EXPECT_DOUBLE_EQ(v, 2.5);
  EXPECT_TRUE(parse_double("-1e3", v));
  EXPECT_DOUBLE_EQ(v, -1000);
  EXPECT_FALSE(parse_double("", v));
  EXPECT_FALSE(parse_double("12abc", v));
  EXPECT_FALSE(parse_double("abc", v));
}
