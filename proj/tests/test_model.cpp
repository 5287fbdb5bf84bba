#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <concord/concord.hpp>

#include "support.hpp"

using namespace concord;
using testsupport::TempDir;
using testsupport::thrown_code;

namespace {

JointDistribution diag_half() {
  return JointDistribution::from_matrix(2, 2, {0.5, 0.0, 0.0, 0.5});
}

JointDistribution skewed_diag() {
  return JointDistribution::from_matrix(2, 2, {0.8, 0.0, 0.0, 0.2});
}

// KL uniform weights, normalized: interior of the simplex
JointDistribution random_distribution(std::size_t rows, std::size_t cols,
                                      Xoshiro256pp& gen) {
  std::vector<double> probs(rows * cols);
  double total = 0.0;
  for (auto& p : probs) {
    p = gen.uniform01() + 1e-9;
    total += p;
  }
  for (auto& p : probs) p /= total;
  CompensatedSum sum;
  for (double p : probs) sum.add(p);
  probs.back() += 1.0 - sum.value();
  return JointDistribution::from_matrix(rows, cols, std::move(probs));
}

JointDistribution random_product_distribution(std::size_t rows, std::size_t cols,
                                              Xoshiro256pp& gen) {
  const auto marginal = [&](std::size_t m) {
    std::vector<double> w(m);
    double total = 0.0;
    for (auto& v : w) {
      v = gen.uniform01() + 1e-9;
      total += v;
    }
    for (auto& v : w) v /= total;
    CompensatedSum sum;
    for (double v : w) sum.add(v);
    w.back() += 1.0 - sum.value();
    return w;
  };
  const auto rowm = marginal(rows);
  const auto colm = marginal(cols);
  return JointDistribution::outer(rowm, colm);
}

}  // namespace

TEST_CASE("joint distributions validate shape, sign and total mass") {
  CHECK(thrown_code([] { JointDistribution::from_matrix(2, 2, {0.5, 0.5}); }) ==
        Errc::invalid_distribution);
  CHECK(thrown_code([] {
          JointDistribution::from_matrix(2, 2, {0.7, -0.1, 0.2, 0.2});
        }) == Errc::invalid_distribution);
  CHECK(thrown_code([] {
          JointDistribution::from_matrix(2, 2, {0.5, 0.2, 0.1, 0.1});
        }) == Errc::invalid_distribution);

  const auto d = JointDistribution::from_matrix(2, 3, {0.1, 0.2, 0.3, 0.15, 0.15, 0.1});
  CHECK(d.rows() == 2);
  CHECK(d.cols() == 3);
  CHECK(d.row_marginals()[0] == Catch::Approx(0.6).margin(1e-12));
  CHECK(d.col_marginals()[2] == Catch::Approx(0.4).margin(1e-12));
}

TEST_CASE("distribution files load and validate") {
  TempDir dir;
  const auto good = dir.write("pi.csv", "0.5,0\n0,0.5\n");
  const auto d = JointDistribution::load(good);
  CHECK(d.rows() == 2);
  CHECK(d.at(0, 0) == 0.5);

  const auto short_sum = dir.write("short.csv", "0.5,0\n0,0.4\n");
  CHECK(thrown_code([&] { JointDistribution::load(short_sum); }) ==
        Errc::invalid_distribution);
  const auto ragged = dir.write("ragged.csv", "0.5,0\n0.5\n");
  CHECK(thrown_code([&] { JointDistribution::load(ragged); }) == Errc::parse_error);
  const auto junk = dir.write("junk.csv", "0.5,zero\n0,0.5\n");
  CHECK(thrown_code([&] { JointDistribution::load(junk); }) == Errc::parse_error);
  CHECK(thrown_code([&] { JointDistribution::load(dir.path() / "nope.csv"); }) ==
        Errc::io_error);
}

TEST_CASE("theta on the frozen examples") {
  std::vector<double> diag4(16, 0.0);
  for (int k = 0; k < 4; ++k) diag4[k * 4 + k] = 0.25;
  CHECK(theta(JointDistribution::from_matrix(4, 4, diag4)) == Catch::Approx(0.25).margin(1e-15));

  CHECK(theta(JointDistribution::from_matrix(2, 2, {0.25, 0.25, 0.25, 0.25})) ==
        Catch::Approx(0.25).margin(1e-15));
  CHECK(theta(diag_half()) == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("theta0 on the frozen examples") {
  CHECK(theta0(diag_half()) == Catch::Approx(0.25).margin(1e-15));
  CHECK(theta0(JointDistribution::from_matrix(2, 2, {0.25, 0.25, 0.25, 0.25})) ==
        Catch::Approx(0.25).margin(1e-15));
  CHECK(theta0(skewed_diag()) == Catch::Approx(0.4624).margin(1e-15));
}

TEST_CASE("quadruplet estimator is unbiased for theta0") {
  // Monte-Carlo cross-check of the 0.4624 value at n=20
  const auto pi = skewed_diag();
  const std::size_t reps = 100000;
  const auto values = mc::replicate<double>(reps, 4, [&](std::size_t rep) {
    const auto [a, b] = sample(pi, 20, substream(9001, rep));
    const auto p = pair_sums(summarize_sparse(a, b));
    return to_double(p.sum_q) / to_double(6 * binom4(int128(20)));
  });
  const auto stats = mc::mean_se(values);
  REQUIRE(std::abs(stats.mean - theta0(pi)) <= 4.0 * stats.se);
}

TEST_CASE("ri expectations on the frozen examples") {
  const auto indep = JointDistribution::from_matrix(2, 2, {0.25, 0.25, 0.25, 0.25});
  CHECK(theta_ri(indep) == Catch::Approx(theta0_ri(indep)).margin(1e-12));
  CHECK(theta_ri(diag_half()) == Catch::Approx(1.0).margin(1e-15));
  CHECK(theta_ri(skewed_diag()) == Catch::Approx(1.0).margin(1e-15));
  CHECK(theta0_ri(diag_half()) == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("variance of the mri") {
  const auto degenerate = JointDistribution::from_matrix(1, 1, {1.0});
  CHECK(variance_mri(degenerate, 5) == Catch::Approx(0.0).margin(1e-15));
  CHECK(variance_mri(degenerate, 1000) == Catch::Approx(0.0).margin(1e-15));

  // diag(1/2): sum pi^2 = 1/2, sum pi^3 = 1/4, so the triplet term vanishes
  CHECK(variance_mri(diag_half(), 10) == Catch::Approx(0.25 / 45.0).margin(1e-15));

  CHECK(thrown_code([] { variance_mri(diag_half(), 2); }) == Errc::too_few_items);

  // decays towards zero as n grows
  double previous = variance_mri(skewed_diag(), 8);
  for (std::uint64_t n : {16, 32, 64, 128, 256}) {
    const double current = variance_mri(skewed_diag(), n);
    REQUIRE(current < previous);
    previous = current;
  }
  REQUIRE(variance_mri(skewed_diag(), 1u << 20) < 1e-5);
}

TEST_CASE("expected adjusted index vanishes under independence") {
  Xoshiro256pp gen(77);
  for (int round = 0; round < 50; ++round) {
    const auto pi = random_product_distribution(2 + gen.below(5), 2 + gen.below(5), gen);
    for (std::uint64_t n : {4, 16, 256}) {
      REQUIRE(std::abs(expected_ari(pi, n)) <= 1e-12);
    }
  }
}

TEST_CASE("expected adjusted index on the frozen examples") {
  // diag(1/2) at n=4: 2*0.5 - 2/36 * (6*0.5 + 24*0.25 + 6*0.25) = 1 - 7/12
  CHECK(expected_ari(diag_half(), 4) == Catch::Approx(1.0 - 7.0 / 12.0).margin(1e-15));
  // limit 2 (sum pi^2 - sum pi_k.^2 pi_.l^2) = 0.5
  CHECK(expected_ari(diag_half(), 1000000) == Catch::Approx(0.5).margin(1e-4));
  CHECK(thrown_code([] { expected_ari(diag_half(), 3); }) == Errc::too_few_items);
}

TEST_CASE("bias vanishes under independence") {
  Xoshiro256pp gen(83);
  for (int round = 0; round < 50; ++round) {
    const auto pi = random_product_distribution(2 + gen.below(4), 2 + gen.below(4), gen);
    for (std::uint64_t n : {2, 10, 100, 10000}) {
      REQUIRE(std::abs(bias(pi, n).bias) <= 1e-15);
    }
  }
}

TEST_CASE("bias respects the 8/n bound and the n=200 magnitude") {
  Xoshiro256pp gen(89);
  for (int round = 0; round < 200; ++round) {
    const auto pi = random_distribution(1 + gen.below(8), 1 + gen.below(8), gen);
    for (std::uint64_t n : {2, 4, 16, 64, 200, 1024}) {
      const auto report = bias(pi, n);
      REQUIRE(std::abs(report.bias) <= report.bound);
      if (n == 200) REQUIRE(std::abs(report.bias) < 0.04);
    }
  }
}

TEST_CASE("definitional and rewritten bias forms agree") {
  Xoshiro256pp gen(97);
  for (int round = 0; round < 1000; ++round) {
    const auto pi = random_distribution(1 + gen.below(6), 1 + gen.below(6), gen);
    const std::uint64_t n = 4 + gen.below(1021);
    const double definitional = theta0(pi) - expected_theta0_ri_hat(pi, n) / 2.0;
    REQUIRE(bias(pi, n).bias == Catch::Approx(definitional).margin(1e-12));
  }
}

TEST_CASE("scenario matrices match their displayed forms") {
  const auto s1 = scenario_distribution({1, 2, 0.3});
  CHECK(s1.at(0, 0) == Catch::Approx(0.7).margin(1e-15));
  CHECK(s1.at(0, 1) == 0.0);
  CHECK(s1.at(1, 0) == 0.0);
  CHECK(s1.at(1, 1) == Catch::Approx(0.3).margin(1e-15));

  const auto s2 = scenario_distribution({2, 2, 0.3});
  CHECK(s2.at(0, 0) == Catch::Approx(0.35).margin(1e-15));
  CHECK(s2.at(0, 1) == Catch::Approx(0.15).margin(1e-15));
  CHECK(s2.at(1, 0) == Catch::Approx(0.15).margin(1e-15));
  CHECK(s2.at(1, 1) == Catch::Approx(0.35).margin(1e-15));

  const auto s3 = scenario_distribution({3, 2, 0.3});
  CHECK(s3.at(0, 0) == Catch::Approx(0.7).margin(1e-15));
  CHECK(s3.at(0, 1) == Catch::Approx(0.15).margin(1e-15));
  CHECK(s3.at(1, 0) == Catch::Approx(0.15).margin(1e-15));
  CHECK(s3.at(1, 1) == 0.0);
}

TEST_CASE("scenario matrices satisfy the distribution invariants across the grid") {
  for (int scenario = 1; scenario <= 3; ++scenario) {
    for (std::size_t k = 2; k <= 128; ++k) {
      for (double eps : {0.05, 0.3, 0.5, 0.8, 0.95}) {
        const auto pi = scenario_distribution({scenario, k, eps});
        bool non_negative = true;
        double total = 0.0;
        for (double p : pi.probs()) {
          non_negative &= p >= 0.0;
          total += p;
        }
        REQUIRE(non_negative);
        REQUIRE(total == Catch::Approx(1.0).margin(1e-12));
        double row_total = 0.0;
        for (double r : pi.row_marginals()) row_total += r;
        REQUIRE(row_total == Catch::Approx(1.0).margin(1e-12));
      }
    }
  }
}

TEST_CASE("scenario specs are validated") {
  CHECK(thrown_code([] { scenario_distribution({4, 3, 0.3}); }) == Errc::invalid_spec);
  CHECK(thrown_code([] { scenario_distribution({1, 1, 0.3}); }) == Errc::invalid_spec);
  CHECK(thrown_code([] { scenario_distribution({1, 3, 0.0}); }) == Errc::invalid_spec);
  CHECK(thrown_code([] { scenario_distribution({1, 3, 1.0}); }) == Errc::invalid_spec);
}

TEST_CASE("scenario 2 bias decays quadratically, unlike scenarios 1 and 3") {
  // uniform marginals make the 1/n coefficient cancel exactly for scenario 2
  const auto slope_of = [](const JointDistribution& pi) {
    std::vector<double> xs, ys;
    for (std::uint64_t n : {256, 1024, 4096, 16384, 65536}) {
      xs.push_back(std::log(static_cast<double>(n)));
      ys.push_back(std::log(std::abs(bias(pi, n).bias)));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      num += (xs[i] - mx) * (ys[i] - my);
      den += (xs[i] - mx) * (xs[i] - mx);
    }
    return num / den;
  };

  CHECK(slope_of(scenario_distribution({1, 4, 0.3})) == Catch::Approx(-1.0).margin(0.1));
  CHECK(slope_of(scenario_distribution({3, 4, 0.3})) == Catch::Approx(-1.0).margin(0.1));
  CHECK(slope_of(scenario_distribution({2, 4, 0.3})) == Catch::Approx(-2.0).margin(0.1));
}

TEST_CASE("sampling is deterministic and respects the distribution") {
  const auto degenerate = JointDistribution::from_matrix(2, 2, {0.0, 1.0, 0.0, 0.0});
  const auto [a, b] = sample(degenerate, 50, 1);
  CHECK(a.num_clusters() == 1);
  CHECK(b.num_clusters() == 1);

  const auto pi = diag_half();
  const auto first = sample(pi, 1000, 42);
  const auto second = sample(pi, 1000, 42);
  CHECK(first.first.assignments() == second.first.assignments());
  CHECK(first.second.assignments() == second.second.assignments());
  const auto other = sample(pi, 1000, 43);
  CHECK(first.first.assignments() != other.first.assignments());

  // diag(1/2) draws the two cells with equal probability; the share of
  // items landing in the first-observed cell stays within 4 sigma of 1/2
  const std::size_t n = 100000;
  const auto [c1, c2] = sample(pi, n, 7);
  std::size_t first_cell = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (c1[i] == c1[0] && c2[i] == c2[0]) ++first_cell;
  const double freq = static_cast<double>(first_cell) / n;
  REQUIRE(std::abs(freq - 0.5) <= 4.0 * std::sqrt(0.25 / n));

  // unobserved clusters are absent from the factorized outputs
  const auto thin = JointDistribution::from_matrix(2, 2, {0.5, 0.5, 0.0, 0.0});
  const auto [t1, t2] = sample(thin, 64, 11);
  CHECK(t1.num_clusters() == 1);
  CHECK(t2.num_clusters() == 2);
}

TEST_CASE("moment report composes the individual operations") {
  const auto pi = scenario_distribution({2, 3, 0.3});
  const auto m = moments(pi, 12);
  CHECK(m.theta == Catch::Approx(theta(pi)).margin(1e-15));
  CHECK(m.theta0 == Catch::Approx(theta0(pi)).margin(1e-15));
  CHECK(m.sigma2 == Catch::Approx(variance_mri(pi, 12)).margin(1e-15));
  CHECK(m.e_ari == Catch::Approx(expected_ari(pi, 12)).margin(1e-15));
  CHECK(m.theta_ri == Catch::Approx(theta_ri(pi)).margin(1e-15));
  CHECK(m.theta0_ri == Catch::Approx(theta0_ri(pi)).margin(1e-15));
  CHECK(thrown_code([&] { moments(pi, 3); }) == Errc::too_few_items);
}

TEST_CASE("monte-carlo moments track the formulas at small n") {
  const auto pi = scenario_distribution({2, 3, 0.3});
  const std::size_t reps = 30000;
  const auto values = mc::replicate<double>(reps, 4, [&](std::size_t rep) {
    const auto [a, b] = sample(pi, 10, substream(1234, rep));
    return mri(summarize_sparse(a, b));
  });
  const auto stats = mc::mean_se(values);
  REQUIRE(std::abs(stats.mean - theta(pi)) <= 4.0 * stats.se);
  REQUIRE(stats.variance == Catch::Approx(variance_mri(pi, 10)).epsilon(0.10));
}
