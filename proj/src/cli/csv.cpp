#include "caustica/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace caustica::cli {

std::string format_double(double value, FloatFormat format) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = format == FloatFormat::fixed17
                     ? std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific, 16)
                     : std::to_chars(buf, buf + sizeof buf, value);
  return {buf, r.ptr};
}

std::string quote_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string format_cell(const Cell& cell, FloatFormat format) {
  struct Visitor {
    FloatFormat format;
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double v) const { return format_double(v, format); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return quote_field(v); }
  };
  return std::visit(Visitor{format}, cell);
}

void write_csv(std::ostream& out, const std::vector<std::string>& header, const std::vector<Row>& rows,
               FloatFormat format) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << quote_field(header[i]);
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i], format);
    out << '\n';
  }
}

}  // namespace caustica::cli
