#include "tg/format.hpp"

#include <charconv>
#include <cmath>

#include "tg/error.hpp"

namespace tg {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double value = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(Errc::SyntaxError, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace tg
