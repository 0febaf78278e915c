#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cimq::text {

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

// Fixed-point with `digits` decimals.
std::string format_fixed(double v, int digits);

std::vector<std::string_view> split_ws(std::string_view line);

// Parse helpers throw ParseError carrying `line_no`.
double parse_double(std::string_view tok, std::size_t line_no);
long long parse_int(std::string_view tok, std::size_t line_no);

}  // namespace cimq::text
