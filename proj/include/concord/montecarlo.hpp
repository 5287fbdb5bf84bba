#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <thread>
#include <vector>

#include "concord/labels.hpp"
#include "concord/rng.hpp"
#include "concord/summation.hpp"

namespace concord::mc {

// Thread-count resolution: an explicit request wins, then the
// CONCORD_THREADS environment variable, then single-threaded.
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CONCORD_THREADS")) {
    const long value = std::strtol(env, nullptr, 10);
    if (value > 0) return static_cast<unsigned>(value);
  }
  return 1;
}

// Runs fn(rep) for every rep in [0, reps) on up to `threads` threads. Each
// result lands in its replicate's slot, so the returned vector, and any
// aggregate folded from it in index order, is identical for every thread
// count. fn must be pure given rep and must not throw.
template <class T, class Fn>
std::vector<T> replicate(std::size_t reps, unsigned threads, Fn&& fn) {
  std::vector<T> results(reps);
  if (reps == 0) return results;
  const unsigned workers =
      std::max<unsigned>(1, std::min<std::size_t>(threads, reps));
  if (workers == 1) {
    for (std::size_t r = 0; r < reps; ++r) results[r] = fn(r);
    return results;
  }
  const std::size_t chunk = (reps + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(reps, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&results, &fn, begin, end] {
      for (std::size_t r = begin; r < end; ++r) results[r] = fn(r);
    });
  }
  for (std::size_t r = 0; r < std::min(chunk, reps); ++r) results[r] = fn(r);
  for (auto& t : pool) t.join();
  return results;
}

struct MeanSe {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double se = 0.0;        // standard error of the mean
  std::size_t count = 0;
};

// Compensated two-pass moments in index order: bitwise reproducible for a
// fixed input vector regardless of how it was produced.
inline MeanSe mean_se(std::span<const double> values) {
  MeanSe out;
  out.count = values.size();
  if (values.empty()) return out;
  out.mean = compensated_sum(values) / static_cast<double>(values.size());
  if (values.size() > 1) {
    CompensatedSum squares;
    for (double v : values) {
      const double d = v - out.mean;
      squares.add(d * d);
    }
    out.variance = squares.value() / static_cast<double>(values.size() - 1);
    out.se = std::sqrt(out.variance / static_cast<double>(values.size()));
  }
  return out;
}

// Uniform labels over {0..num_clusters-1}, factorized so ids are dense.
inline LabelVector uniform_labels(std::size_t n, std::uint32_t num_clusters,
                                  std::uint64_t seed) {
  Xoshiro256pp gen(seed);
  std::vector<std::uint32_t> raw(n);
  for (auto& v : raw) v = gen.below(num_clusters);
  return factorize(raw);
}

}  // namespace concord::mc
