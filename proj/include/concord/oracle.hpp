#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "concord/contingency.hpp"
#include "concord/error.hpp"
#include "concord/indices.hpp"
#include "concord/int128.hpp"
#include "concord/labels.hpp"

// Brute-force reference implementations for tests and benchmarks. Nothing
// here is a production path; compare() never calls into this namespace.
namespace concord::oracle {

inline constexpr std::size_t kDefaultEnumerationCap = 40;

// Pairwise co-membership indicators, stored for all i < j.
class Indicator {
 public:
  Indicator(const LabelVector& c1, const LabelVector& c2) : n_(c1.n()) {
    if (c1.n() != c2.n()) raise(Errc::length_mismatch, "label vectors differ in length");
    const std::size_t pairs = n_ * (n_ - 1) / 2;
    c1_same_.reserve(pairs);
    c2_same_.reserve(pairs);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        c1_same_.push_back(c1[i] == c1[j]);
        c2_same_.push_back(c2[i] == c2[j]);
      }
    }
  }

  std::size_t n() const noexcept { return n_; }
  bool c1_same(std::size_t i, std::size_t j) const noexcept { return c1_same_[tri(i, j)]; }
  bool c2_same(std::size_t i, std::size_t j) const noexcept { return c2_same_[tri(i, j)]; }

 private:
  // row-major upper triangle, i < j
  std::size_t tri(std::size_t i, std::size_t j) const noexcept {
    return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
  }

  std::size_t n_;
  std::vector<std::uint8_t> c1_same_;
  std::vector<std::uint8_t> c2_same_;
};

struct EnumeratedPairSums {
  PairSums sums;
  std::uint64_t count_p = 0;  // pairs-of-pairs sharing both indices, C(n,2)
  std::uint64_t count_t = 0;  // sharing exactly one index, n(n-1)(n-2)
  std::uint64_t count_q = 0;  // sharing none, 6 C(n,4)
};

// Direct enumeration of every ordered pair-of-pairs; quadratic in C(n,2),
// so usable only under the cap.
inline EnumeratedPairSums enumerate_pair_sums(const LabelVector& c1, const LabelVector& c2,
                                              std::size_t cap = kDefaultEnumerationCap) {
  if (c1.n() != c2.n()) raise(Errc::length_mismatch, "label vectors differ in length");
  if (c1.n() > cap)
    raise(Errc::cap_exceeded, "enumeration over n=" + std::to_string(c1.n()) +
                                  " exceeds the cap of " + std::to_string(cap));
  const std::size_t n = c1.n();
  const Indicator ind(c1, c2);

  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  EnumeratedPairSums out;
  std::uint64_t total1 = 0;
  std::uint64_t total2 = 0;
  for (const auto& [i, j] : pairs) {
    total1 += ind.c1_same(i, j);
    total2 += ind.c2_same(i, j);
  }
  out.sums.prod_p = int128(total1) * total2;

  for (const auto& [i, j] : pairs) {
    const bool first_same = ind.c1_same(i, j);
    for (const auto& [i2, j2] : pairs) {
      const int shared = int(i == i2) + int(i == j2) + int(j == i2) + int(j == j2);
      const int hit = (first_same && ind.c2_same(i2, j2)) ? 1 : 0;
      if (shared == 2) {
        ++out.count_p;
        out.sums.sum_p += hit;
      } else if (shared == 1) {
        ++out.count_t;
        out.sums.sum_t += hit;
      } else {
        ++out.count_q;
        out.sums.sum_q += hit;
      }
    }
  }
  return out;
}

// Literal transcription of the bracketed closed form for the disjoint
// quadruplet sum in terms of the table sums; must agree exactly with
// pair_sums(s).sum_q (tested, not assumed).
inline int128 sum_q_closed_form(const ContingencySummary& s) {
  if (s.n >= kMaxItems)
    raise(Errc::overflow, "n >= 3e9 would overflow the 128-bit products");
  const int128 n = s.n;
  const int128 cells_choose2 = (s.s_cells2 - n) / 2;
  const int128 rows_choose2 = (s.s_rows2 - n) / 2;
  const int128 cols_choose2 = (s.s_cols2 - n) / 2;
  const int128 triplet_sum = 2 * n + s.s_rcm - s.s_cells2 - s.s_rows2 - s.s_cols2;
  const int128 bracket = 4 * cells_choose2 + 4 * triplet_sum +
                         2 * n * (rows_choose2 + cols_choose2) + n * n;
  return (s.s_rows2 * s.s_cols2 - bracket) / 4;
}

}  // namespace concord::oracle
