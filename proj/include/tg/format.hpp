#pragma once

#include <string>
#include <string_view>

namespace tg {

/// Shortest decimal representation that round-trips through a double.
std::string format_double(double value);

/// Strict double parse of the whole string; throws Error(SyntaxError) on junk.
double parse_double(std::string_view text);

}  // namespace tg
