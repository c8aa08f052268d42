#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cspbench {

/// Shortest decimal form that round-trips through parse_double.
/// NaN prints as "nan", infinities as "inf"/"-inf".
std::string format_double(double v);

/// Strict parse of a full token; throws std::invalid_argument on anything
/// that is not a complete floating-point literal (accepts "nan"/"inf").
double parse_double(std::string_view s);

long long parse_long(std::string_view s);
std::uint64_t parse_u64(std::string_view s);

/// Splits one CSV line on commas. Fields are never quoted in this
/// project's file formats, so no quote handling is done.
std::vector<std::string> split_csv_line(std::string_view line);

} // namespace cspbench
