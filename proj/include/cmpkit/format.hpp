#pragma once

#include <string>

namespace cmpkit {

/// Locale-independent shortest-safe decimal: 17 significant digits,
/// lowercase exponent. "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double value);

/// Strict locale-independent parse of a whole string; throws DomainError.
double parse_double(const std::string& text);

}  // namespace cmpkit
