#pragma once

#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace hypac {

// Comma-separated output with a header row and 17 significant digits,
// byte-stable across runs for identical inputs.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(std::span<const double> values);
  void close();

 private:
  std::ofstream out_;
};

std::string format_g17(double v);

}  // namespace hypac
