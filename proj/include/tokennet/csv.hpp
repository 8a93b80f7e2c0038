#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tokennet::csv {

/// Splits one CSV line into fields. Double-quoted fields may contain commas
/// and doubled quotes; everything else is taken verbatim.
std::vector<std::string> split_line(std::string_view line);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

/// Locale-independent double parse; rejects trailing garbage.
std::optional<double> parse_double(std::string_view s);

std::optional<long long> parse_int(std::string_view s);

/// Joins fields with commas, quoting only when a field needs it.
std::string join(const std::vector<std::string>& fields);

/// Reads the next line, tolerating both \n and \r\n endings.
bool getline(std::istream& in, std::string& line);

}  // namespace tokennet::csv
