#pragma once

#include <cstdint>
#include <string>

namespace concord {

// Exact accumulators for the pair-counting sums. The largest quantity the
// library forms is sum_k n_k.^2 * sum_l n_.l^2 <= n^4, which fits a signed
// 128-bit integer for n < 3e9.
using int128 = __int128;
using uint128 = unsigned __int128;

static_assert(sizeof(int128) == 16, "128-bit integer support is required");

inline double to_double(int128 v) noexcept { return static_cast<double>(v); }

inline std::string to_string(int128 value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  uint128 magnitude =
      negative ? ~static_cast<uint128>(value) + 1 : static_cast<uint128>(value);
  char digits[48];
  int pos = 48;
  while (magnitude != 0) {
    digits[--pos] = static_cast<char>('0' + static_cast<int>(magnitude % 10));
    magnitude /= 10;
  }
  std::string out;
  if (negative) out.push_back('-');
  out.append(digits + pos, digits + 48);
  return out;
}

// Exact binomial coefficients; every intermediate product is an integer.
constexpr int128 binom2(int128 m) noexcept { return m * (m - 1) / 2; }

constexpr int128 binom4(int128 m) noexcept {
  return m < 4 ? 0 : m * (m - 1) / 2 * ((m - 2) * (m - 3) / 2) / 6;
}

}  // namespace concord
