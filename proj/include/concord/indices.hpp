#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include "concord/contingency.hpp"
#include "concord/error.hpp"
#include "concord/int128.hpp"
#include "concord/labels.hpp"

namespace concord {

// Sums of indicator products over the partition of ordered pairs-of-pairs
// ({i,j},{i',j'}) by the number of distinct indices: P shares both, T shares
// one, Q shares none. prod_p = (sum_P c1)(sum_P c2), so by construction
// prod_p == sum_p + sum_t + sum_q.
struct PairSums {
  int128 sum_p = 0;   // sum over P of c1_ij c2_ij
  int128 sum_t = 0;   // sum over T of c1_ij c2_ij'
  int128 sum_q = 0;   // sum over Q of c1_ij c2_i'j'
  int128 prod_p = 0;  // (sum over P of c1_ij) * (sum over P of c2_ij)
};

// A computed index, or the reason it is undefined for this input.
struct IndexValue {
  double value = std::numeric_limits<double>::quiet_NaN();
  Errc error = Errc::none;

  bool ok() const noexcept { return error == Errc::none; }
};

struct IndexReport {
  std::uint64_t n = 0;
  std::uint32_t clusters1 = 0;
  std::uint32_t clusters2 = 0;
  double ri = 0.0;
  double mri = 0.0;
  double ari_unnormalized = 0.0;
  IndexValue ari_normalized{};
  IndexValue mari{};
};

namespace detail {

inline void require_items(const ContingencySummary& s, std::uint64_t minimum) {
  if (s.n < minimum)
    raise(Errc::too_few_items, "need at least " + std::to_string(minimum) +
                                   " items, got " + std::to_string(s.n));
}

}  // namespace detail

// Fraction of item pairs co-clustered in both clusterings.
inline double mri(const ContingencySummary& s) {
  detail::require_items(s, 2);
  const int128 n = s.n;
  return to_double(s.s_cells2 - n) / to_double(n * (n - 1));
}

// Fraction of item pairs consistent by similarity or by difference.
inline double ri(const ContingencySummary& s) {
  detail::require_items(s, 2);
  const int128 n = s.n;
  const int128 cells_choose2 = (s.s_cells2 - n) / 2;
  const int128 rows_choose2 = (s.s_rows2 - n) / 2;
  const int128 cols_choose2 = (s.s_cols2 - n) / 2;
  return 1.0 +
         to_double(2 * cells_choose2 - rows_choose2 - cols_choose2) / to_double(binom2(n));
}

// The three partition sums and their product identity, all exact. sum_q is
// obtained by subtracting the P and T terms from prod_p; the long closed
// form lives in the oracle module and is tested equal.
inline PairSums pair_sums(const ContingencySummary& s) {
  if (s.n < 1) raise(Errc::empty_input, "empty summary");
  const int128 n = s.n;
  PairSums p;
  p.sum_p = (s.s_cells2 - n) / 2;
  p.sum_t = 2 * n + s.s_rcm - s.s_cells2 - s.s_rows2 - s.s_cols2;
  p.prod_p = ((s.s_rows2 - n) / 2) * ((s.s_cols2 - n) / 2);
  p.sum_q = p.prod_p - p.sum_p - p.sum_t;
  return p;
}

// MRI minus the unbiased multinomial estimate of its chance level. The
// chance term averages the co-membership products over disjoint index
// quadruplets, so n >= 4 is required for it to exist.
inline double mari(const ContingencySummary& s) {
  detail::require_items(s, 4);
  const PairSums p = pair_sums(s);
  const int128 n = s.n;
  return to_double(p.sum_p) / to_double(binom2(n)) -
         to_double(p.sum_q) / to_double(6 * binom4(n));
}

// Chance-corrected but unnormalized index:
// 2 sum_kl C(n_kl,2) / C(n,2) - 2 sum_k C(n_k.,2) sum_l C(n_.l,2) / C(n,2)^2.
inline double ari_unnormalized(const ContingencySummary& s) {
  detail::require_items(s, 2);
  const int128 n = s.n;
  const int128 pairs = binom2(n);
  const int128 cells_choose2 = (s.s_cells2 - n) / 2;
  const int128 rows_choose2 = (s.s_rows2 - n) / 2;
  const int128 cols_choose2 = (s.s_cols2 - n) / 2;
  return to_double(2 * (pairs * cells_choose2 - rows_choose2 * cols_choose2)) /
         to_double(pairs * pairs);
}

namespace detail {

// Numerator and denominator of the normalized ratio, both scaled by
// 2 C(n,2) so the degenerate case is an exact integer zero test.
inline std::pair<int128, int128> normalized_ari_parts(const ContingencySummary& s) {
  const int128 n = s.n;
  const int128 pairs = binom2(n);
  const int128 cells_choose2 = (s.s_cells2 - n) / 2;
  const int128 rows_choose2 = (s.s_rows2 - n) / 2;
  const int128 cols_choose2 = (s.s_cols2 - n) / 2;
  const int128 numerator = 2 * (pairs * cells_choose2 - rows_choose2 * cols_choose2);
  const int128 denominator =
      pairs * (rows_choose2 + cols_choose2) - 2 * rows_choose2 * cols_choose2;
  return {numerator, denominator};
}

}  // namespace detail

// Classical normalized adjusted index. Degenerate inputs (both clusterings
// all singletons, or both a single cluster) are an error, never a NaN.
inline double ari_normalized(const ContingencySummary& s) {
  detail::require_items(s, 2);
  const auto [numerator, denominator] = detail::normalized_ari_parts(s);
  if (denominator == 0)
    raise(Errc::degenerate_normalization,
          "normalization denominator is zero (both clusterings trivial)");
  return to_double(numerator) / to_double(denominator);
}

// Full report from two label vectors via the sparse summary. MARI and the
// normalized index may be undefined for a given input; their slots carry
// the reason instead of a value.
inline IndexReport compare(const LabelVector& c1, const LabelVector& c2) {
  const ContingencySummary s = summarize_sparse(c1, c2);
  detail::require_items(s, 2);
  IndexReport report;
  report.n = s.n;
  report.clusters1 = c1.num_clusters();
  report.clusters2 = c2.num_clusters();
  report.ri = ri(s);
  report.mri = mri(s);
  report.ari_unnormalized = ari_unnormalized(s);
  if (const auto [numerator, denominator] = detail::normalized_ari_parts(s);
      denominator != 0) {
    report.ari_normalized = {to_double(numerator) / to_double(denominator), Errc::none};
  } else {
    report.ari_normalized = {std::numeric_limits<double>::quiet_NaN(),
                             Errc::degenerate_normalization};
  }
  if (s.n >= 4) {
    report.mari = {mari(s), Errc::none};
  } else {
    report.mari = {std::numeric_limits<double>::quiet_NaN(), Errc::too_few_items};
  }
  return report;
}

}  // namespace concord
