#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "concord/error.hpp"
#include "concord/int128.hpp"
#include "concord/labels.hpp"
#include "concord/rng.hpp"
#include "concord/summation.hpp"

namespace concord {

// Joint distribution pi_kl of one item's pair of cluster labels, with
// precomputed marginals. Invariants (non-negative, sums to one within
// tolerance) are validated once at construction; operations rely on them.
class JointDistribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  static JointDistribution from_matrix(std::size_t rows, std::size_t cols,
                                       std::vector<double> probs) {
    if (rows == 0 || cols == 0 || probs.size() != rows * cols)
      raise(Errc::invalid_distribution, "matrix shape mismatch");
    for (double p : probs) {
      if (!std::isfinite(p) || p < 0.0)
        raise(Errc::invalid_distribution, "probabilities must be finite and non-negative");
    }
    CompensatedSum total;
    for (double p : probs) total.add(p);
    if (std::abs(total.value() - 1.0) > kSumTolerance)
      raise(Errc::invalid_distribution,
            "probabilities sum to " + std::to_string(total.value()) + ", expected 1");

    JointDistribution d;
    d.rows_ = rows;
    d.cols_ = cols;
    d.probs_ = std::move(probs);
    d.row_marginals_.assign(rows, 0.0);
    d.col_marginals_.assign(cols, 0.0);
    for (std::size_t k = 0; k < rows; ++k) {
      for (std::size_t l = 0; l < cols; ++l) {
        const double p = d.probs_[k * cols + l];
        d.row_marginals_[k] += p;
        d.col_marginals_[l] += p;
      }
    }
    return d;
  }

  // Delimited matrix of reals, one row per line; blank lines are skipped.
  static JointDistribution load(const std::filesystem::path& path, char delimiter = ',') {
    const auto lines = detail::read_lines(path);
    std::vector<double> probs;
    std::size_t rows = 0;
    std::size_t cols = 0;
    for (std::size_t r = 0; r < lines.size(); ++r) {
      if (detail::trim(lines[r]).empty()) continue;
      const auto fields = detail::split_fields(lines[r], delimiter);
      if (cols == 0) {
        cols = fields.size();
      } else if (fields.size() != cols) {
        raise(Errc::parse_error, path.string() + " row " + std::to_string(r + 1) +
                                     ": expected " + std::to_string(cols) +
                                     " columns, got " + std::to_string(fields.size()));
      }
      for (const auto field : fields) {
        const auto token = detail::trim(field);
        double value = 0.0;
        const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc{} || end != token.data() + token.size())
          raise(Errc::parse_error, path.string() + " row " + std::to_string(r + 1) +
                                       ": not a number: \"" + std::string(token) + "\"");
        probs.push_back(value);
      }
      ++rows;
    }
    if (rows == 0) raise(Errc::empty_input, path.string() + " has no data rows");
    return from_matrix(rows, cols, std::move(probs));
  }

  // Product distribution of the given marginals.
  static JointDistribution outer(std::span<const double> row_marginals,
                                 std::span<const double> col_marginals) {
    std::vector<double> probs;
    probs.reserve(row_marginals.size() * col_marginals.size());
    for (double r : row_marginals)
      for (double c : col_marginals) probs.push_back(r * c);
    return from_matrix(row_marginals.size(), col_marginals.size(), std::move(probs));
  }

  // The independence counterpart with the same marginals.
  JointDistribution independent_product() const { return outer(row_marginals_, col_marginals_); }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double at(std::size_t k, std::size_t l) const noexcept { return probs_[k * cols_ + l]; }
  std::span<const double> probs() const noexcept { return probs_; }
  std::span<const double> row_marginals() const noexcept { return row_marginals_; }
  std::span<const double> col_marginals() const noexcept { return col_marginals_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> probs_;
  std::vector<double> row_marginals_;
  std::vector<double> col_marginals_;
};

struct MomentReport {
  std::uint64_t n = 0;
  double theta = 0.0;      // E(MRI)
  double theta0 = 0.0;     // E(MRI) under independence
  double sigma2 = 0.0;     // Var(MRI) at n
  double e_ari = 0.0;      // E of the unnormalized adjusted index at n
  double theta_ri = 0.0;   // E(RI)
  double theta0_ri = 0.0;  // E(RI) under independence
};

struct BiasReport {
  std::uint64_t n = 0;
  double bias = 0.0;   // multinomial bias of the pair-product null estimator
  double bound = 0.0;  // 8 / n
};

struct ScenarioSpec {
  int scenario_id = 1;          // 1, 2 or 3
  std::size_t num_clusters = 2; // K = L
  double epsilon = 0.3;         // imbalance level in (0, 1)
};

namespace detail {

struct PowerSums {
  double cells2 = 0.0;  // sum pi_kl^2
  double cells3 = 0.0;  // sum pi_kl^3
  double rows2 = 0.0;   // sum pi_k.^2
  double cols2 = 0.0;   // sum pi_.l^2
  double cross = 0.0;   // sum pi_kl pi_k. pi_.l
};

inline PowerSums power_sums(const JointDistribution& pi) {
  CompensatedSum cells2, cells3, cross, rows2, cols2;
  const auto rowm = pi.row_marginals();
  const auto colm = pi.col_marginals();
  for (std::size_t k = 0; k < pi.rows(); ++k) {
    for (std::size_t l = 0; l < pi.cols(); ++l) {
      const double p = pi.at(k, l);
      cells2.add(p * p);
      cells3.add(p * p * p);
      cross.add(p * rowm[k] * colm[l]);
    }
  }
  for (double r : rowm) rows2.add(r * r);
  for (double c : colm) cols2.add(c * c);
  return {cells2.value(), cells3.value(), rows2.value(), cols2.value(), cross.value()};
}

inline void require_model_items(std::uint64_t n, std::uint64_t minimum) {
  if (n < minimum)
    raise(Errc::too_few_items,
          "need n >= " + std::to_string(minimum) + ", got " + std::to_string(n));
}

}  // namespace detail

// E(MRI) = sum pi_kl^2.
inline double theta(const JointDistribution& pi) { return detail::power_sums(pi).cells2; }

// E(MRI) under independence = (sum pi_k.^2)(sum pi_.l^2).
inline double theta0(const JointDistribution& pi) {
  const auto ps = detail::power_sums(pi);
  return ps.rows2 * ps.cols2;
}

inline double theta_ri(const JointDistribution& pi) {
  const auto ps = detail::power_sums(pi);
  return 1.0 + 2.0 * ps.cells2 - ps.rows2 - ps.cols2;
}

inline double theta0_ri(const JointDistribution& pi) {
  const auto ps = detail::power_sums(pi);
  return 1.0 + 2.0 * ps.rows2 * ps.cols2 - ps.rows2 - ps.cols2;
}

// Var(MRI) at sample size n. The pair term carries the Bernoulli variance,
// the shared-index triplet term the covariance between overlapping pairs;
// disjoint quadruplets are independent and contribute nothing.
inline double variance_mri(const JointDistribution& pi, std::uint64_t n) {
  detail::require_model_items(n, 3);
  const auto ps = detail::power_sums(pi);
  const double pairs = to_double(binom2(int128(n)));
  const double triplets = to_double(int128(n) * (int128(n) - 1) * (int128(n) - 2));
  const double square = ps.cells2 * ps.cells2;
  return (ps.cells2 - square) / pairs + triplets / (pairs * pairs) * (ps.cells3 - square);
}

// Multinomial expectation of the pair-product null estimator
// 2 (sum_P C1)(sum_P C2) / C(n,2)^2, i.e. the chance-correction term of the
// unnormalized adjusted index.
inline double expected_theta0_ri_hat(const JointDistribution& pi, std::uint64_t n) {
  detail::require_model_items(n, 4);
  const auto ps = detail::power_sums(pi);
  const double pairs = to_double(binom2(int128(n)));
  const double triplets = to_double(int128(n) * (int128(n) - 1) * (int128(n) - 2));
  const double quads6 = to_double(6 * binom4(int128(n)));
  return 2.0 *
         (pairs * ps.cells2 + triplets * ps.cross + quads6 * ps.rows2 * ps.cols2) /
         (pairs * pairs);
}

// E of the unnormalized adjusted index at n; zero under independence.
inline double expected_ari(const JointDistribution& pi, std::uint64_t n) {
  detail::require_model_items(n, 4);
  const auto ps = detail::power_sums(pi);
  return 2.0 * ps.cells2 - expected_theta0_ri_hat(pi, n);
}

// Bias of the pair-product null estimator under the multinomial model, in
// the convention without the leading factor 2; the bias of the full ARI
// adjustment term is twice this value. Closed form:
// (4n-6)/(n(n-1)) sum pi_k.^2 pi_.l^2 - 2/(n(n-1)) sum pi_kl^2
//   - 4(n-2)/(n(n-1)) sum pi_kl pi_k. pi_.l, with |bias| <= 8/n.
inline BiasReport bias(const JointDistribution& pi, std::uint64_t n) {
  detail::require_model_items(n, 2);
  const auto ps = detail::power_sums(pi);
  const double nd = static_cast<double>(n);
  const double nn1 = nd * (nd - 1.0);
  const double value = (4.0 * nd - 6.0) / nn1 * (ps.rows2 * ps.cols2) -
                       2.0 / nn1 * ps.cells2 - 4.0 * (nd - 2.0) / nn1 * ps.cross;
  return {n, value, 8.0 / nd};
}

inline MomentReport moments(const JointDistribution& pi, std::uint64_t n) {
  detail::require_model_items(n, 4);
  const auto ps = detail::power_sums(pi);
  MomentReport m;
  m.n = n;
  m.theta = ps.cells2;
  m.theta0 = ps.rows2 * ps.cols2;
  m.sigma2 = variance_mri(pi, n);
  m.e_ari = expected_ari(pi, n);
  m.theta_ri = 1.0 + 2.0 * ps.cells2 - ps.rows2 - ps.cols2;
  m.theta0_ri = 1.0 + 2.0 * ps.rows2 * ps.cols2 - ps.rows2 - ps.cols2;
  return m;
}

// Square K x K joint distributions used by the simulation grids.
// 1: disproportionate diagonal. 2: proportional diagonal plus a cyclic
// superdiagonal dependency. 3: disproportionate first row and column.
// The last nonzero cell absorbs the float rounding residue so the matrix
// sums to one exactly.
inline JointDistribution scenario_distribution(const ScenarioSpec& spec) {
  if (spec.scenario_id < 1 || spec.scenario_id > 3)
    raise(Errc::invalid_spec, "scenario_id must be 1, 2 or 3");
  if (spec.num_clusters < 2) raise(Errc::invalid_spec, "scenario needs K >= 2");
  if (!(spec.epsilon > 0.0) || !(spec.epsilon < 1.0))
    raise(Errc::invalid_spec, "epsilon must lie in (0, 1)");

  const std::size_t K = spec.num_clusters;
  const double eps = spec.epsilon;
  std::vector<double> probs(K * K, 0.0);
  switch (spec.scenario_id) {
    case 1:
      probs[0] = 1.0 - eps;
      for (std::size_t k = 1; k < K; ++k)
        probs[k * K + k] = eps / static_cast<double>(K - 1);
      break;
    case 2:
      for (std::size_t k = 0; k < K; ++k) {
        probs[k * K + k] = (1.0 - eps) / static_cast<double>(K);
        probs[k * K + (k + 1) % K] = eps / static_cast<double>(K);
      }
      break;
    case 3: {
      probs[0] = 1.0 - eps;
      const double off = eps / static_cast<double>(2 * K - 2);
      for (std::size_t l = 1; l < K; ++l) probs[l] = off;
      for (std::size_t k = 1; k < K; ++k) probs[k * K] = off;
      break;
    }
  }

  CompensatedSum total;
  for (double p : probs) total.add(p);
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) {
      probs[i] += 1.0 - total.value();
      break;
    }
  }
  return JointDistribution::from_matrix(K, K, std::move(probs));
}

// n independent draws of (C1_i, C2_i) with P(k,l) = pi_kl, by inverse CDF
// over the flattened nonzero cells. Deterministic for a given seed. Outputs
// are factorized, so clusters that were never drawn are absent.
inline std::pair<LabelVector, LabelVector> sample(const JointDistribution& pi,
                                                  std::size_t n, std::uint64_t seed) {
  if (n == 0) raise(Errc::empty_input, "cannot sample zero items");

  std::vector<double> cdf;
  std::vector<std::uint32_t> cell_row;
  std::vector<std::uint32_t> cell_col;
  CompensatedSum running;
  for (std::size_t k = 0; k < pi.rows(); ++k) {
    for (std::size_t l = 0; l < pi.cols(); ++l) {
      const double p = pi.at(k, l);
      if (p <= 0.0) continue;
      running.add(p);
      cdf.push_back(running.value());
      cell_row.push_back(static_cast<std::uint32_t>(k));
      cell_col.push_back(static_cast<std::uint32_t>(l));
    }
  }
  if (cdf.empty()) raise(Errc::invalid_distribution, "no positive cells");
  cdf.back() = 1.0;  // the total is 1 within tolerance; close the top end

  Xoshiro256pp gen(seed);
  std::vector<std::uint32_t> raw1(n);
  std::vector<std::uint32_t> raw2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = gen.uniform01();
    const std::size_t idx =
        std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    raw1[i] = cell_row[idx];
    raw2[i] = cell_col[idx];
  }
  return {factorize(raw1), factorize(raw2)};
}

}  // namespace concord
