#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "caustica/cli/config.hpp"

namespace caustica::cli {

/// Empty cells stand for "not applicable" (e.g. k on a regular row).
using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;
using Row = std::vector<Cell>;

std::string format_double(double value, FloatFormat format);
std::string format_cell(const Cell& cell, FloatFormat format);

/// RFC-4180 quoting: fields with comma, quote, CR or LF are quoted.
std::string quote_field(const std::string& field);

/// Header plus rows, LF line endings.
void write_csv(std::ostream& out, const std::vector<std::string>& header, const std::vector<Row>& rows,
               FloatFormat format);

}  // namespace caustica::cli
