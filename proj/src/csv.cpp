#include "sentorder/csv.hpp"

#include "sentorder/error.hpp"

namespace sentorder::csv {

bool Reader::next(Record& out) {
  out.fields.clear();
  out.line = line_;

  int c = in_.get();
  if (c == std::char_traits<char>::eof()) return false;

  std::string field;
  bool quoted = false;     // inside a quoted section
  bool was_quoted = false; // current field started with a quote
  for (;; c = in_.get()) {
    if (c == std::char_traits<char>::eof()) {
      if (quoted) {
        throw Error("CSV: unterminated quoted field starting on line " +
                    std::to_string(out.line));
      }
      out.fields.push_back(std::move(field));
      return true;
    }
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case ',':
        out.fields.push_back(std::move(field));
        field.clear();
        was_quoted = false;
        break;
      case '"':
        if (!field.empty() || was_quoted) {
          throw Error("CSV: stray quote on line " + std::to_string(line_));
        }
        quoted = was_quoted = true;
        break;
      case '\r':
        if (in_.peek() == '\n') in_.get();
        [[fallthrough]];
      case '\n':
        ++line_;
        out.fields.push_back(std::move(field));
        return true;
      default:
        if (was_quoted) {
          throw Error("CSV: text after closing quote on line " + std::to_string(line_));
        }
        field.push_back(ch);
    }
  }
}

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace sentorder::csv
