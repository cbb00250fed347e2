#pragma once

#include <istream>
#include <string>
#include <vector>

namespace sentorder::csv {

// One parsed record plus the 1-based physical line it started on.
struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

// RFC-4180 reader: comma separated, double-quote quoting with "" escapes,
// quoted fields may span lines. CRLF and LF line endings are accepted.
// Throws sentorder::Error on an unterminated quote or stray quote.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Returns false at end of input.
  bool next(Record& out);

 private:
  std::istream& in_;
  std::size_t line_ = 1;
};

// Quotes a field when it contains a comma, quote, CR or LF.
std::string escape(const std::string& field);

}  // namespace sentorder::csv
