#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "concord/error.hpp"
#include "concord/int128.hpp"
#include "concord/labels.hpp"

namespace concord {

// Sufficient statistics of the K x L contingency table n_kl. Every index
// this library computes is a function of these five sums, so the sparse
// path never materializes the table itself.
struct ContingencySummary {
  std::uint64_t n = 0;
  int128 s_cells2 = 0;  // sum_kl n_kl^2
  int128 s_rows2 = 0;   // sum_k  n_k.^2
  int128 s_cols2 = 0;   // sum_l  n_.l^2
  int128 s_rcm = 0;     // sum_kl n_k. * n_kl * n_.l
  std::uint64_t nonzero_cells = 0;
};

// 128-bit accumulators stay exact (products reach n^4) below this count.
inline constexpr std::uint64_t kMaxItems = 3'000'000'000ULL;

inline constexpr std::uint64_t kDefaultDenseCellCap = 100'000'000ULL;

namespace detail {

inline void check_paired(const LabelVector& c1, const LabelVector& c2) {
  if (c1.n() != c2.n())
    raise(Errc::length_mismatch, "label vectors disagree: " + std::to_string(c1.n()) +
                                     " vs " + std::to_string(c2.n()) + " items");
  if (c1.n() == 0) raise(Errc::empty_input, "no items to summarize");
  if (c1.n() >= kMaxItems)
    raise(Errc::overflow, "n >= 3e9 would overflow the 128-bit accumulators");
}

// Buckets the column ids by row id (one counting-sort pass over the items),
// then tallies each bucket against an L-sized count array. Cells touched in
// a bucket are tracked so the resets cost one write per nonzero cell. The
// bucket buffer is the only O(n) scratch; ColId is narrowed to 16 bits when
// L allows, which halves the scattered write traffic.
template <class ColId>
void tally_cells(const LabelVector& c1, const LabelVector& c2,
                 const std::vector<std::uint64_t>& row_counts,
                 const std::vector<std::uint64_t>& col_counts, ContingencySummary& s) {
  const std::size_t n = c1.n();
  const std::uint32_t num_rows = c1.num_clusters();

  std::unique_ptr<ColId[]> grouped(new ColId[n]);
  std::vector<std::size_t> offset(num_rows);
  std::size_t running = 0;
  for (std::uint32_t k = 0; k < num_rows; ++k) {
    offset[k] = running;
    running += row_counts[k];
  }
  for (std::size_t i = 0; i < n; ++i)
    grouped[offset[c1[i]]++] = static_cast<ColId>(c2[i]);

  std::vector<std::uint64_t> cell_count(c2.num_clusters(), 0);
  std::vector<ColId> touched;
  std::size_t begin = 0;
  for (std::uint32_t k = 0; k < num_rows; ++k) {
    const std::size_t end = begin + row_counts[k];
    for (std::size_t i = begin; i < end; ++i) {
      const ColId l = grouped[i];
      if (cell_count[l]++ == 0) touched.push_back(l);
    }
    for (const ColId l : touched) {
      const std::uint64_t count = cell_count[l];
      s.s_cells2 += int128(count) * count;
      s.s_rcm += int128(count) * row_counts[k] * col_counts[l];
      ++s.nonzero_cells;
      cell_count[l] = 0;
    }
    touched.clear();
    begin = end;
  }
}

}  // namespace detail

// O(n + K + L) time and space: one bucket pass groups the items by their
// first cluster id, then each bucket's second ids are tallied against an
// L-sized count array. Only the bucket buffer and marginal arrays are
// allocated, never the K x L table.
inline ContingencySummary summarize_sparse(const LabelVector& c1, const LabelVector& c2) {
  detail::check_paired(c1, c2);
  const std::size_t n = c1.n();
  const std::uint32_t num_rows = c1.num_clusters();
  const std::uint32_t num_cols = c2.num_clusters();

  std::vector<std::uint64_t> row_counts(num_rows, 0);
  std::vector<std::uint64_t> col_counts(num_cols, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++row_counts[c1[i]];
    ++col_counts[c2[i]];
  }

  ContingencySummary s;
  s.n = n;
  for (std::uint64_t c : row_counts) s.s_rows2 += int128(c) * c;
  for (std::uint64_t c : col_counts) s.s_cols2 += int128(c) * c;
  if (num_cols <= 0xffffu) {
    detail::tally_cells<std::uint16_t>(c1, c2, row_counts, col_counts, s);
  } else {
    detail::tally_cells<std::uint32_t>(c1, c2, row_counts, col_counts, s);
  }
  return s;
}

// Baseline that materializes the dense K x L table: O(n + K*L) time and
// space. Produces the identical summary; kept as the oracle for tests and
// as the benchmark comparison point.
inline ContingencySummary summarize_dense(const LabelVector& c1, const LabelVector& c2,
                                          std::uint64_t cell_cap = kDefaultDenseCellCap) {
  detail::check_paired(c1, c2);
  const std::size_t n = c1.n();
  const std::uint64_t num_rows = c1.num_clusters();
  const std::uint64_t num_cols = c2.num_clusters();
  if (num_rows * num_cols > cell_cap)
    raise(Errc::allocation_refused,
          std::to_string(num_rows) + "x" + std::to_string(num_cols) +
              " table exceeds the dense cap of " + std::to_string(cell_cap) + " cells");

  std::vector<std::uint32_t> table(num_rows * num_cols, 0);
  std::vector<std::uint64_t> row_counts(num_rows, 0);
  std::vector<std::uint64_t> col_counts(num_cols, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++table[static_cast<std::uint64_t>(c1[i]) * num_cols + c2[i]];
    ++row_counts[c1[i]];
    ++col_counts[c2[i]];
  }

  ContingencySummary s;
  s.n = n;
  for (std::uint64_t c : row_counts) s.s_rows2 += int128(c) * c;
  for (std::uint64_t c : col_counts) s.s_cols2 += int128(c) * c;
  for (std::uint64_t k = 0; k < num_rows; ++k) {
    for (std::uint64_t l = 0; l < num_cols; ++l) {
      const std::uint64_t count = table[k * num_cols + l];
      if (count == 0) continue;
      s.s_cells2 += int128(count) * count;
      s.s_rcm += int128(count) * row_counts[k] * col_counts[l];
      ++s.nonzero_cells;
    }
  }
  return s;
}

}  // namespace concord
