// Locale-independent number formatting and small CSV helpers.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace salz {

/// Scientific notation with 17 significant digits, independent of locale.
std::string format_double(double v);

/// Shortest representation that round-trips, independent of locale.
std::string format_shortest(double v);

/// Strict locale-independent parse of the whole field. nullopt on failure.
std::optional<double> parse_double(std::string_view s);

/// Splits one CSV line on commas (no quoting support; none of the formats
/// here need it). Trailing '\r' is stripped.
std::vector<std::string> split_csv_line(std::string_view line);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view contents);

}  // namespace salz
