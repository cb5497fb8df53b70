#include "output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "errors.hpp"

namespace plaser {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : n_cols_(header.size()) {
  row(std::move(header));
}

void CsvWriter::row(std::vector<std::string> fields) {
  if (fields.size() != n_cols_)
    fail(ErrCode::ConfigError, "internal: csv row width mismatch");
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) body_ += ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\r\n") != std::string::npos) {
      body_ += '"';
      for (char c : f) {
        if (c == '"') body_ += '"';
        body_ += c;
      }
      body_ += '"';
    } else {
      body_ += f;
    }
  }
  body_ += "\r\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec)
      fail(ErrCode::ConfigError,
           "cannot create directory '" + target.parent_path().string() + "': " + ec.message());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrCode::ConfigError, "cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) fail(ErrCode::ConfigError, "write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target, ec);
  if (ec)
    fail(ErrCode::ConfigError, "cannot move '" + tmp.string() + "' into place: " + ec.message());
}

}  // namespace plaser
