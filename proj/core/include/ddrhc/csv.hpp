#pragma once

#include "ddrhc/types.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace ddrhc {

/// Deterministic CSV writer: fixed header, '\n' line endings, shortest
/// round-trip double formatting so equal runs produce byte-identical files.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::vector<std::string> header);
  ~CsvWriter();

  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& cells);
  void close();

  static std::string format_double(double v);

 private:
  std::ofstream out_;
  size_t columns_ = 0;
  std::string path_;
};

}  // namespace ddrhc
