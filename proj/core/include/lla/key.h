#ifndef LLA_KEY_H_
#define LLA_KEY_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>

namespace lla {

// Decimal inputs are stored as round(value * 10^7).
inline constexpr std::int64_t kFixedPointScale = 10'000'000;

// An element of the ordered universe. Ordering and equality look at `raw`
// only; `seq` identifies the element (arrival number) and is what the
// movement accounting keys on. Equal `raw` values are duplicates.
struct Key {
  std::int64_t raw = 0;
  std::uint64_t seq = 0;

  friend constexpr bool operator==(Key a, Key b) { return a.raw == b.raw; }
  friend constexpr std::strong_ordering operator<=>(Key a, Key b) {
    return a.raw <=> b.raw;
  }
};

// Same element, not merely an equal key.
constexpr bool same_element(Key a, Key b) {
  return a.raw == b.raw && a.seq == b.seq;
}

// Compares below every key fixed_point_parse can produce.
inline constexpr Key kMinKey{std::numeric_limits<std::int64_t>::min(),
                             std::numeric_limits<std::uint64_t>::max()};

// Parses a plain decimal ("-12.5", "37.7749", "42") into a fixed-point key.
// Digits past the seventh decimal place are rounded half away from zero.
// Scientific notation, whitespace, and empty strings are rejected with a
// ParseError carrying `line`.
Key fixed_point_parse(std::string_view text, std::size_t line = 0);

}  // namespace lla

#endif  // LLA_KEY_H_
