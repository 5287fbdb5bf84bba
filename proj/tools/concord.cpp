// concord CLI: compare label files, evaluate multinomial model quantities,
// run bias simulation grids and the sparse-vs-dense benchmark.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include <concord/concord.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitDegenerate = 3;

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_seconds(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

struct CompareConfig {
  std::vector<std::string> files;
  std::string format = "json";
  std::string delimiter = ",";
  bool tab = false;
  bool skip_header = false;
  bool require_mari = false;
  bool require_normalized = false;
};

struct ExpectConfig {
  std::string pi_path;
  std::uint64_t n = 0;
  std::string format = "json";
  std::string delimiter = ",";
  bool tab = false;
};

struct SimulateConfig {
  std::vector<int> scenarios{1, 2, 3};
  std::vector<std::uint64_t> k_grid{2, 4, 8, 16, 32, 64, 128};
  std::vector<double> epsilons{0.3, 0.8};
  std::vector<std::uint64_t> n_grid{16, 32, 64, 128, 256, 512, 1024};
  std::size_t mc_reps = 0;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool independent = false;
};

struct BenchConfig {
  std::vector<std::uint64_t> n_grid{100000, 200000, 400000, 800000, 1600000};
  std::vector<std::uint64_t> k_grid{100, 1000, 5000};
  std::size_t reps = 5;
  std::uint64_t seed = 1;
  std::uint64_t dense_cap = concord::kDefaultDenseCellCap;
};

char resolve_delimiter(const std::string& delimiter, bool tab) {
  if (tab) return '\t';
  if (delimiter.size() != 1)
    concord::raise(concord::Errc::invalid_spec, "--delimiter must be a single character");
  return delimiter[0];
}

template <class T>
void check_grid(const std::vector<T>& grid, const std::string& name) {
  if (grid.empty()) concord::raise(concord::Errc::invalid_spec, name + " is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1]))
      concord::raise(concord::Errc::invalid_spec, name + " must be strictly increasing");
  }
}

void emit_index_json(std::string& out, const char* key, const concord::IndexValue& slot,
                     bool last) {
  out += "  \"";
  out += key;
  out += "\": ";
  if (slot.ok()) {
    out += fmt_real(slot.value);
    out += last ? "\n" : ",\n";
  } else {
    out += "null,\n  \"";
    out += key;
    out += "_error\": \"";
    out += concord::error_name(slot.error);
    out += last ? "\"\n" : "\",\n";
  }
}

std::string render_compare_json(const concord::IndexReport& r) {
  std::string out = "{\n";
  out += "  \"n\": " + std::to_string(r.n) + ",\n";
  out += "  \"clusters_1\": " + std::to_string(r.clusters1) + ",\n";
  out += "  \"clusters_2\": " + std::to_string(r.clusters2) + ",\n";
  out += "  \"ri\": " + fmt_real(r.ri) + ",\n";
  out += "  \"mri\": " + fmt_real(r.mri) + ",\n";
  out += "  \"ari_unnormalized\": " + fmt_real(r.ari_unnormalized) + ",\n";
  emit_index_json(out, "ari_normalized", r.ari_normalized, false);
  emit_index_json(out, "mari", r.mari, true);
  out += "}\n";
  return out;
}

std::string render_compare_tsv(const concord::IndexReport& r) {
  const auto slot = [](const concord::IndexValue& v) {
    return v.ok() ? fmt_real(v.value) : std::string(concord::error_name(v.error));
  };
  std::string out = "n\tclusters_1\tclusters_2\tri\tmri\tari_unnormalized\tari_normalized\tmari\n";
  out += std::to_string(r.n) + "\t" + std::to_string(r.clusters1) + "\t" +
         std::to_string(r.clusters2) + "\t" + fmt_real(r.ri) + "\t" + fmt_real(r.mri) +
         "\t" + fmt_real(r.ari_unnormalized) + "\t" + slot(r.ari_normalized) + "\t" +
         slot(r.mari) + "\n";
  return out;
}

int run_compare(const CompareConfig& cfg) {
  concord::LabelFileOptions options;
  options.delimiter = resolve_delimiter(cfg.delimiter, cfg.tab);
  options.skip_header = cfg.skip_header;

  concord::LabelVector c1;
  concord::LabelVector c2;
  if (cfg.files.size() == 1) {
    std::tie(c1, c2) = concord::read_two_columns(cfg.files[0], options);
  } else {
    c1 = concord::read_single_column(cfg.files[0], options);
    c2 = concord::read_single_column(cfg.files[1], options);
  }

  const concord::IndexReport report = concord::compare(c1, c2);
  std::fputs(cfg.format == "json" ? render_compare_json(report).c_str()
                                  : render_compare_tsv(report).c_str(),
             stdout);

  if (cfg.require_mari && !report.mari.ok()) {
    std::fprintf(stderr, "%s: mari requested but undefined for this input\n",
                 std::string(concord::error_name(report.mari.error)).c_str());
    return kExitDegenerate;
  }
  if (cfg.require_normalized && !report.ari_normalized.ok()) {
    std::fprintf(stderr, "%s: normalized ARI requested but undefined for this input\n",
                 std::string(concord::error_name(report.ari_normalized.error)).c_str());
    return kExitDegenerate;
  }
  return kExitOk;
}

constexpr const char* kBiasNote =
    "bias follows the unscaled null-estimator convention; the bias of the full ARI "
    "adjustment term is twice this value";

int run_expect(const ExpectConfig& cfg) {
  const char delimiter = resolve_delimiter(cfg.delimiter, cfg.tab);
  const auto pi = concord::JointDistribution::load(cfg.pi_path, delimiter);
  const auto m = concord::moments(pi, cfg.n);
  const auto b = concord::bias(pi, cfg.n);

  std::string out;
  if (cfg.format == "json") {
    out += "{\n";
    out += "  \"n\": " + std::to_string(cfg.n) + ",\n";
    out += "  \"theta\": " + fmt_real(m.theta) + ",\n";
    out += "  \"theta0\": " + fmt_real(m.theta0) + ",\n";
    out += "  \"theta_ri\": " + fmt_real(m.theta_ri) + ",\n";
    out += "  \"theta0_ri\": " + fmt_real(m.theta0_ri) + ",\n";
    out += "  \"sigma2\": " + fmt_real(m.sigma2) + ",\n";
    out += "  \"e_ari\": " + fmt_real(m.e_ari) + ",\n";
    out += "  \"bias\": " + fmt_real(b.bias) + ",\n";
    out += "  \"bias_bound\": " + fmt_real(b.bound) + ",\n";
    out += std::string("  \"bias_convention\": \"") + kBiasNote + "\"\n";
    out += "}\n";
  } else {
    out += std::string("# ") + kBiasNote + "\n";
    out += "n\ttheta\ttheta0\ttheta_ri\ttheta0_ri\tsigma2\te_ari\tbias\tbias_bound\n";
    out += std::to_string(cfg.n) + "\t" + fmt_real(m.theta) + "\t" + fmt_real(m.theta0) +
           "\t" + fmt_real(m.theta_ri) + "\t" + fmt_real(m.theta0_ri) + "\t" +
           fmt_real(m.sigma2) + "\t" + fmt_real(m.e_ari) + "\t" + fmt_real(b.bias) +
           "\t" + fmt_real(b.bound) + "\n";
  }
  std::fputs(out.c_str(), stdout);
  return kExitOk;
}

int run_simulate(const SimulateConfig& cfg) {
  check_grid(cfg.scenarios, "--scenario");
  check_grid(cfg.k_grid, "--K-grid");
  check_grid(cfg.epsilons, "--epsilon");
  check_grid(cfg.n_grid, "--n-grid");
  for (int s : cfg.scenarios)
    if (s < 1 || s > 3) concord::raise(concord::Errc::invalid_spec, "scenario ids must be 1..3");
  for (double e : cfg.epsilons)
    if (!(e > 0.0) || !(e < 1.0))
      concord::raise(concord::Errc::invalid_spec, "epsilon values must lie in (0, 1)");
  for (std::uint64_t k : cfg.k_grid)
    if (k < 2) concord::raise(concord::Errc::invalid_spec, "K values must be >= 2");
  for (std::uint64_t n : cfg.n_grid) {
    if (n < 2) concord::raise(concord::Errc::invalid_spec, "n values must be >= 2");
    if (cfg.mc_reps > 0 && n < 4)
      concord::raise(concord::Errc::invalid_spec, "Monte-Carlo columns need n >= 4");
  }

  const unsigned threads = concord::mc::resolve_threads(cfg.threads);
  std::string out;
  out += std::string("# concord simulate schema v1; ") + kBiasNote + "\n";
  out += "scenario,K,epsilon,n,bias,abs_bias,bound,mc_reps,"
         "ari_mc_mean,ari_mc_se,mari_mc_mean,mari_mc_se\n";

  std::uint64_t cell = 0;
  for (int scenario : cfg.scenarios) {
    for (std::uint64_t k : cfg.k_grid) {
      for (double eps : cfg.epsilons) {
        auto pi = concord::scenario_distribution(
            {scenario, static_cast<std::size_t>(k), eps});
        if (cfg.independent) pi = pi.independent_product();
        for (std::uint64_t n : cfg.n_grid) {
          const auto b = concord::bias(pi, n);
          out += std::to_string(scenario) + "," + std::to_string(k) + "," +
                 fmt_real(eps) + "," + std::to_string(n) + "," + fmt_real(b.bias) +
                 "," + fmt_real(std::abs(b.bias)) + "," + fmt_real(b.bound);
          if (cfg.mc_reps > 0) {
            const std::uint64_t cell_seed = concord::substream(cfg.seed, cell);
            const auto values = concord::mc::replicate<std::array<double, 2>>(
                cfg.mc_reps, threads, [&](std::size_t rep) {
                  const auto [a, b2] =
                      concord::sample(pi, n, concord::substream(cell_seed, rep));
                  const auto s = concord::summarize_sparse(a, b2);
                  return std::array<double, 2>{concord::ari_unnormalized(s),
                                               concord::mari(s)};
                });
            std::vector<double> ari_values(values.size());
            std::vector<double> mari_values(values.size());
            for (std::size_t r = 0; r < values.size(); ++r) {
              ari_values[r] = values[r][0];
              mari_values[r] = values[r][1];
            }
            const auto ari_stats = concord::mc::mean_se(ari_values);
            const auto mari_stats = concord::mc::mean_se(mari_values);
            out += "," + std::to_string(cfg.mc_reps) + "," + fmt_real(ari_stats.mean) +
                   "," + fmt_real(ari_stats.se) + "," + fmt_real(mari_stats.mean) +
                   "," + fmt_real(mari_stats.se);
          } else {
            out += ",0,NA,NA,NA,NA";
          }
          out += "\n";
          ++cell;
        }
      }
    }
  }
  std::fputs(out.c_str(), stdout);
  return kExitOk;
}

int run_bench(const BenchConfig& cfg) {
  check_grid(cfg.n_grid, "--n-grid");
  check_grid(cfg.k_grid, "--K-grid");
  if (cfg.reps < 1) concord::raise(concord::Errc::invalid_spec, "--reps must be >= 1");

  using clock = std::chrono::steady_clock;
  const auto median_of = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };

  std::string out;
  out += "# concord bench schema v1; times in seconds, K = L, uniform independent labels\n";
  out += "n,K,L,reps,sparse_seconds,dense_seconds,dense_over_sparse\n";

  std::uint64_t checksum = 0;
  const auto absorb = [&checksum](std::uint64_t value) {
    checksum = (checksum << 1 | checksum >> 63) ^ value;
  };
  std::uint64_t cell = 0;
  for (std::uint64_t k : cfg.k_grid) {
    for (std::uint64_t n : cfg.n_grid) {
      const std::uint64_t cell_seed = concord::substream(cfg.seed, cell);
      const auto c1 = concord::mc::uniform_labels(
          n, static_cast<std::uint32_t>(k), concord::substream(cell_seed, 0));
      const auto c2 = concord::mc::uniform_labels(
          n, static_cast<std::uint32_t>(k), concord::substream(cell_seed, 1));
      const bool dense_fits =
          static_cast<std::uint64_t>(c1.num_clusters()) * c2.num_clusters() <=
          cfg.dense_cap;

      absorb(static_cast<std::uint64_t>(concord::summarize_sparse(c1, c2).s_cells2));
      std::vector<double> sparse_times(cfg.reps);
      for (auto& t : sparse_times) {
        const auto start = clock::now();
        const auto s = concord::summarize_sparse(c1, c2);
        t = std::chrono::duration<double>(clock::now() - start).count();
        absorb(static_cast<std::uint64_t>(s.s_cells2) + s.nonzero_cells);
      }
      const double sparse_med = median_of(sparse_times);

      std::string dense_field = "skipped";
      std::string ratio_field = "NA";
      if (dense_fits) {
        absorb(static_cast<std::uint64_t>(
            concord::summarize_dense(c1, c2, cfg.dense_cap).s_cells2));
        std::vector<double> dense_times(cfg.reps);
        for (auto& t : dense_times) {
          const auto start = clock::now();
          const auto s = concord::summarize_dense(c1, c2, cfg.dense_cap);
          t = std::chrono::duration<double>(clock::now() - start).count();
          absorb(static_cast<std::uint64_t>(s.s_cells2) + s.nonzero_cells);
        }
        const double dense_med = median_of(dense_times);
        dense_field = fmt_seconds(dense_med);
        ratio_field = fmt_real(dense_med / sparse_med);
      }

      out += std::to_string(n) + "," + std::to_string(k) + "," + std::to_string(k) +
             "," + std::to_string(cfg.reps) + "," + fmt_seconds(sparse_med) + "," +
             dense_field + "," + ratio_field + "\n";
      ++cell;
    }
  }
  char tail[64];
  std::snprintf(tail, sizeof tail, "# checksum %016llx\n",
                static_cast<unsigned long long>(checksum));
  out += tail;
  std::fputs(out.c_str(), stdout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pair-counting comparison of clusterings (RI, MRI, ARI, MARI) with "
               "multinomial model tooling"};
  app.require_subcommand(1);

  CompareConfig cmp_cfg;
  auto* cmp = app.add_subcommand("compare", "compare two clusterings from label files");
  cmp->add_option("files", cmp_cfg.files,
                  "one two-column file, or two single-column files")
      ->required()
      ->expected(1, 2);
  cmp->add_option("--format", cmp_cfg.format, "output format")
      ->check(CLI::IsMember({"json", "tsv"}));
  cmp->add_option("--delimiter", cmp_cfg.delimiter, "field delimiter (default ,)");
  cmp->add_flag("--tab", cmp_cfg.tab, "use tab as the field delimiter");
  cmp->add_flag("--header", cmp_cfg.skip_header, "skip the first row");
  cmp->add_flag("--require-mari", cmp_cfg.require_mari,
                "exit 3 when MARI is undefined for the input");
  cmp->add_flag("--require-normalized-ari", cmp_cfg.require_normalized,
                "exit 3 when the normalized ARI is degenerate");

  ExpectConfig exp_cfg;
  auto* exp = app.add_subcommand(
      "expect", "model moments, expected indices and estimator bias for a joint distribution");
  exp->add_option("--pi", exp_cfg.pi_path, "joint distribution matrix file")->required();
  exp->add_option("--n", exp_cfg.n, "number of items")->required();
  exp->add_option("--format", exp_cfg.format, "output format")
      ->check(CLI::IsMember({"json", "tsv"}));
  exp->add_option("--delimiter", exp_cfg.delimiter, "field delimiter (default ,)");
  exp->add_flag("--tab", exp_cfg.tab, "use tab as the field delimiter");

  SimulateConfig sim_cfg;
  auto* sim = app.add_subcommand("simulate",
                                 "analytic estimator bias over scenario grids, CSV output");
  sim->add_option("--scenario", sim_cfg.scenarios, "scenario ids (subset of 1,2,3)")
      ->delimiter(',');
  sim->add_option("--K-grid", sim_cfg.k_grid, "cluster counts, K = L")->delimiter(',');
  sim->add_option("--epsilon", sim_cfg.epsilons, "imbalance levels in (0,1)")->delimiter(',');
  sim->add_option("--n-grid", sim_cfg.n_grid, "item counts")->delimiter(',');
  sim->add_option("--mc", sim_cfg.mc_reps,
                  "Monte-Carlo replicates per cell for mean/SE columns (0 = off)");
  sim->add_flag("--independent", sim_cfg.independent,
                "replace each scenario with the independent product of its marginals");
  sim->add_option("--seed", sim_cfg.seed, "master seed");
  sim->add_option("--threads", sim_cfg.threads,
                  "worker threads (default: CONCORD_THREADS or 1); output is unaffected");

  BenchConfig bench_cfg;
  auto* bench = app.add_subcommand("bench",
                                   "sparse vs dense summary timings, CSV output");
  bench->add_option("--n-grid", bench_cfg.n_grid, "item counts")->delimiter(',');
  bench->add_option("--K-grid", bench_cfg.k_grid, "cluster counts, K = L")->delimiter(',');
  bench->add_option("--reps", bench_cfg.reps, "timed repetitions per cell (median reported)");
  bench->add_option("--seed", bench_cfg.seed, "master seed for input generation");
  bench->add_option("--dense-cap", bench_cfg.dense_cap,
                    "skip the dense path above this many K*L cells");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (cmp->parsed()) return run_compare(cmp_cfg);
    if (exp->parsed()) return run_expect(exp_cfg);
    if (sim->parsed()) return run_simulate(sim_cfg);
    return run_bench(bench_cfg);
  } catch (const concord::Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
}
