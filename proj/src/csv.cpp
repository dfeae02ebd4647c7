#include "rwre/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rwre {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(std::ostream& out, const std::string& config_json) : out_(out) {
  if (config_json.find_first_of("\r\n") != std::string::npos) {
    throw std::invalid_argument("config header must be a single line");
  }
  out_ << "# config: " << config_json << "\r\n";
}

void CsvWriter::header(const std::vector<std::string>& names) {
  columns_ = names.size();
  row(names);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (columns_ != 0 && fields.size() != columns_) throw std::logic_error("csv row width mismatch");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << csv_field(fields[i]);
  }
  out_ << "\r\n";
}

}  // namespace rwre
