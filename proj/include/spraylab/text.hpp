#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace spraylab {

/// Shortest decimal string that parses back to exactly the same double.
/// Never uses exponent notation for the magnitudes seen in reports.
std::string shortest_repr(double v);

/// shortest_repr, but guaranteed to contain a decimal point ("10" -> "10.0").
/// Report-time format.
std::string format_time(double v);

/// Fixed formatting with `digits` decimals; NaN renders as "NaN".
std::string format_fixed(double v, int digits);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
bool starts_with(std::string_view s, std::string_view prefix);

/// Parses "250k" / "50M" / "1G" style sizes (base 1000) or a plain number.
/// Throws ParseError on garbage.
double parse_scaled_number(const std::string& text, const std::string& context);

double parse_double(const std::string& text, const std::string& context);
long long parse_int(const std::string& text, const std::string& context);

} // namespace spraylab
