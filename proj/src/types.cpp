#include "trendcast/types.hpp"

#include <cctype>
#include <charconv>

namespace trendcast {

Duration parse_duration(const std::string& text) {
  if (text.empty()) throw ParameterError("empty duration");
  Duration unit = 1;
  std::string digits = text;
  switch (std::tolower(static_cast<unsigned char>(text.back()))) {
    case 's': unit = 1; break;
    case 'm': unit = 60; break;
    case 'h': unit = 3600; break;
    case 'd': unit = 86400; break;
    case 'w': unit = 7 * 86400; break;
    default: unit = 0; break;
  }
  if (unit != 0) {
    digits.pop_back();
  } else {
    unit = 1;
  }
  Duration value = 0;
  const auto* end = digits.data() + digits.size();
  const auto [ptr, ec] = std::from_chars(digits.data(), end, value);
  if (ec != std::errc{} || ptr != end || digits.empty()) {
    throw ParameterError("bad duration '" + text + "'");
  }
  return value * unit;
}

}  // namespace trendcast
