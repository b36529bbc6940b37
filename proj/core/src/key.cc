#include "lla/key.h"

#include <limits>
#include <string>

#include "lla/errors.h"

namespace lla {
namespace {

constexpr int kScaleDigits = 7;

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

Key fixed_point_parse(std::string_view text, std::size_t line) {
  const std::string shown(text);
  if (text.empty()) throw ParseError("empty numeric field", line);

  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }

  // Magnitude in units of 10^-7, accumulated wide enough to detect overflow.
  constexpr __int128 kLimit = static_cast<__int128>(std::numeric_limits<std::int64_t>::max());
  __int128 magnitude = 0;
  std::size_t digits = 0;

  while (pos < text.size() && is_digit(text[pos])) {
    magnitude = magnitude * 10 + (text[pos] - '0');
    if (magnitude * kFixedPointScale > kLimit) {
      throw ParseError("value out of fixed-point range: '" + shown + "'", line);
    }
    ++pos;
    ++digits;
  }
  magnitude *= kFixedPointScale;

  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    __int128 place = kFixedPointScale / 10;
    int seen = 0;
    bool round_up = false;
    while (pos < text.size() && is_digit(text[pos])) {
      const int d = text[pos] - '0';
      if (seen < kScaleDigits) {
        magnitude += d * place;
        place /= 10;
      } else if (seen == kScaleDigits) {
        round_up = d >= 5;
      }
      ++seen;
      ++pos;
      ++digits;
    }
    if (round_up) ++magnitude;
  }

  if (digits == 0) throw ParseError("not a number: '" + shown + "'", line);
  if (pos != text.size()) {
    throw ParseError("malformed decimal (only plain decimals are accepted): '" + shown + "'",
                     line);
  }
  if (magnitude > kLimit) {
    throw ParseError("value out of fixed-point range: '" + shown + "'", line);
  }

  const auto value = static_cast<std::int64_t>(magnitude);
  return Key{negative ? -value : value, 0};
}

}  // namespace lla
