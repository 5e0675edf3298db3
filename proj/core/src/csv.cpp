#include "ddrhc/csv.hpp"

#include <cmath>
#include <cstdio>

namespace ddrhc {

CsvWriter::CsvWriter(const std::string& path, std::vector<std::string> header)
    : out_(path), columns_(header.size()), path_(path) {
  if (!out_) throw ValidationError("cannot open " + path + " for writing");
  for (size_t c = 0; c < header.size(); ++c) {
    if (c) out_ << ',';
    out_ << header[c];
  }
  out_ << '\n';
}

CsvWriter::~CsvWriter() { close(); }

void CsvWriter::close() {
  if (out_.is_open()) out_.close();
}

std::string CsvWriter::format_double(double v) {
  char buf[40];
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    return buf;
  }
  // Shortest representation that round-trips; stable across runs.
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  for (int prec = 1; prec < 17; ++prec) {
    char trial[40];
    std::snprintf(trial, sizeof(trial), "%.*g", prec, v);
    std::sscanf(trial, "%lf", &back);
    if (back == v) return trial;
  }
  return buf;
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_)
    throw ValidationError("csv row width mismatch in " + path_);
  for (size_t c = 0; c < values.size(); ++c) {
    if (c) out_ << ',';
    out_ << format_double(values[c]);
  }
  out_ << '\n';
}

void CsvWriter::row_mixed(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw ValidationError("csv row width mismatch in " + path_);
  for (size_t c = 0; c < cells.size(); ++c) {
    if (c) out_ << ',';
    out_ << cells[c];
  }
  out_ << '\n';
}

}  // namespace ddrhc
