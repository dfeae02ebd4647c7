#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rwre {

/// Shortest round-trip form is not used; every number is printed with
/// printf("%.17g") so files compare byte for byte.
std::string format_double(double x);

/// Quotes a field when it contains a comma, quote, CR or LF (RFC 4180).
std::string csv_field(const std::string& s);

/// RFC 4180 writer (CRLF record ends). The first line is a comment
/// "# config: <json>" carrying the full run configuration.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::string& config_json);

  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& fields);

  static std::string num(double x) { return format_double(x); }
  static std::string num(long long x) { return std::to_string(x); }
  static std::string num(int x) { return std::to_string(x); }
  static std::string flag(bool b) { return b ? "true" : "false"; }

 private:
  std::ostream& out_;
  std::size_t columns_ = 0;
};

}  // namespace rwre
