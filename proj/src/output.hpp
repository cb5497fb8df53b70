#pragma once

#include <string>
#include <vector>

#include "logvalue.hpp"

namespace plaser {

// %.17g rendering, enough digits to round-trip a double exactly.
std::string format_double(double v);

// Row-oriented CSV assembly; fields are pre-rendered strings. Fields
// containing separators or quotes get quoted per RFC 4180 (numeric output
// never needs it, but keep the writer honest).
struct CsvWriter {
  explicit CsvWriter(std::vector<std::string> header);
  void row(std::vector<std::string> fields);
  std::string str() const { return body_; }

 private:
  size_t n_cols_;
  std::string body_;
};

// Writes via a temp file in the same directory plus rename, so readers never
// observe a half-written file. Creates parent directories.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace plaser
