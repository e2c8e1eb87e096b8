#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace sgi {

// Plot-interchange CSV: '#'-prefixed metadata lines, one header row, then
// %.12g data rows. The optional timestamp comment is the only line allowed to
// differ between reruns.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, bool timestamp);

  void meta(const std::string& key, const std::string& value);
  void meta(const std::string& key, double value);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);

 private:
  std::ofstream out_;
  std::string path_;
  bool timestamp_;
  bool header_written_ = false;
};

std::string utc_timestamp();

// Two numeric columns, comma-separated; '#' comments and one optional header
// row are skipped. Used for tabulated PSD input.
std::vector<std::pair<double, double>> read_two_column_csv(const std::string& path);

}  // namespace sgi
