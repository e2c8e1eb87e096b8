#include "sgi/csv_io.hpp"

#include <cctype>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "sgi/core.hpp"

namespace sgi {

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

}  // namespace

CsvWriter::CsvWriter(const std::string& path, bool timestamp)
    : out_(path), path_(path), timestamp_(timestamp) {
  if (!out_) throw config_error("cannot open output file: " + path);
}

void CsvWriter::meta(const std::string& key, const std::string& value) {
  out_ << "# " << key << "=" << value << "\n";
}

void CsvWriter::meta(const std::string& key, double value) {
  meta(key, format_number(value));
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  if (timestamp_) out_ << "# generated=" << utc_timestamp() << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
  header_written_ = true;
}

void CsvWriter::row(const std::vector<double>& values) {
  if (!header_written_) throw config_error("CSV row written before header: " + path_);
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << (i ? "," : "") << format_number(values[i]);
  out_ << "\n";
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::pair<double, double>> read_two_column_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open table file: " + path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  bool first_data_line = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string a, b, extra;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
      throw config_error("expected two comma-separated columns in " + path);
    if (std::getline(ss, extra, ','))
      throw config_error("expected exactly two columns in " + path);
    double x, y;
    if (!parse_double(a, x) || !parse_double(b, y)) {
      if (first_data_line) {  // header row
        first_data_line = false;
        continue;
      }
      throw config_error("non-numeric CSV row in " + path + ": " + line);
    }
    first_data_line = false;
    rows.emplace_back(x, y);
  }
  if (rows.empty()) throw config_error("no data rows in " + path);
  return rows;
}

}  // namespace sgi
