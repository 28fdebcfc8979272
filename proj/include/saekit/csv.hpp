#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "saekit/errors.hpp"
#include "saekit/io.hpp"

namespace saekit {

// Doubles are written with %.17g so CSV round-trips are value-exact.
inline std::string csv_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string csv_quote(const std::string& s) {
  bool needs = s.find_first_of(",\"\n") != std::string::npos;
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

class CsvBuilder {
 public:
  explicit CsvBuilder(const std::vector<std::string>& header) { row_strings(header); }

  void row_strings(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << csv_quote(cells[i]);
    }
    out_ << '\n';
  }

  const std::string str() const { return out_.str(); }

  void write(const std::string& path) const { write_text_file(path, out_.str()); }

 private:
  std::ostringstream out_;
};

// Minimal reader for the comma-separated files this project itself writes
// (quoted fields with embedded commas/quotes supported, no embedded
// newlines).
inline std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool in_quotes = false;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n') {
      row.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  if (!cell.empty() || !row.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  if (in_quotes) throw ParseError("unterminated quote in " + path);
  return rows;
}

}  // namespace saekit
