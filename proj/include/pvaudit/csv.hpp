#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace pvaudit::csv {

struct Row {
  std::size_t line = 0;  // 1-based line the record starts on
  std::vector<std::string> fields;
};

/// RFC 4180 records: quoted fields, doubled quotes, LF or CRLF endings.
/// Blank lines are skipped. A leading UTF-8 BOM is ignored.
std::vector<Row> parse(std::string_view text, const std::string& source);

/// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

/// Joins fields into one LF-terminated record.
std::string format_row(const std::vector<std::string>& fields);

/// Shortest decimal string that reads back to the same double.
std::string format_number(double value);

double parse_number(const std::string& field, const std::string& source, std::size_t line,
                    std::size_t column, std::string_view name);

unsigned long long parse_unsigned(const std::string& field, const std::string& source,
                                  std::size_t line, std::size_t column, std::string_view name);

}  // namespace pvaudit::csv
