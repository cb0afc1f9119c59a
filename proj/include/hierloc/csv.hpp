#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace hierloc::csv {

// Streaming RFC 4180 reader: comma separated, double-quoted fields with ""
// escapes, LF or CRLF record ends, newlines allowed inside quotes.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Returns false at end of input. Throws ParseError on an unterminated quote.
  bool next(std::vector<std::string>& fields);
  // 1-based line number where the last returned record started.
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

std::string quote(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Whole-field decimal parse after trimming ASCII whitespace; a leading '+' is
// accepted. Returns false on anything else.
bool parse_double(std::string_view s, double& out);

}  // namespace hierloc::csv
