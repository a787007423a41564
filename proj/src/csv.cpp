#include "hypac/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace hypac {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header)
    : out_(path) {
  if (!out_) throw std::runtime_error("csv: cannot open " + path);
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_g17(values[i]);
  }
  out_ << '\n';
}

void CsvWriter::close() { out_.close(); }

}  // namespace hypac
