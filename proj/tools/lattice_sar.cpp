// lattice_sar: batch front end for the lattice SAR toolkit.
//
// Subcommands:
//   simulate    draw a SAR sample on a square lattice and write it as grid CSV
//   fit         estimate a SAR model from a grid CSV file
//   montecarlo  run simulate -> fit -> metrics cells and tabulate the results
//   benchmark   time the two-step estimator against the ML baseline
//
// Exit codes: 0 success, 2 configuration/validation error, 3 data error,
// 4 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latsar/errors.hpp"
#include "latsar/estimator.hpp"
#include "latsar/grid_csv.hpp"
#include "latsar/lattice.hpp"
#include "latsar/metrics.hpp"
#include "latsar/mlbench.hpp"
#include "latsar/montecarlo.hpp"
#include "latsar/parallel.hpp"
#include "latsar/resample.hpp"
#include "latsar/simulate.hpp"

namespace {

using namespace latsar;

WeightScheme make_scheme(const std::string& name, double c) {
  if (name == "queen") return WeightScheme::queen(c);
  if (name == "rook") return WeightScheme::rook(c);
  if (name == "ese") return WeightScheme::anisotropic_ese(c);
  throw std::invalid_argument("unknown scheme \"" + name + "\" (expected queen, rook, or ese)");
}

int square_side(int n) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (side < 2 || side * side != n) {
    throw std::invalid_argument("--n must be a perfect square >= 4, got " + std::to_string(n));
  }
  return side;
}

std::string join_path(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ParseError("cannot create output directory " + dir + ": " + ec.message());
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  return out;
}

/// Resolve an --r flag ("min", "med", "max", or an explicit count) against a
/// grid; the named modes need a square grid.
int resolve_r_flag(const std::string& text, int n, int m) {
  int r_explicit = 0;
  const RMode mode = parse_r_mode(text, &r_explicit);
  if (mode == RMode::Explicit) return r_explicit;
  const ReplicationCounts counts = replication_counts(n, m);
  switch (mode) {
    case RMode::Min:
      return counts.r_min;
    case RMode::Med:
      return counts.r_med;
    default:
      return counts.r_max;
  }
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOpts {
  std::string scheme = "queen";
  double c = 0.5;
  int n = 625;
  int k = 1;
  std::vector<double> beta;
  double sigma = 1.0;
  std::uint64_t seed = 1;
  std::string out = ".";
};

int run_simulate(const SimulateOpts& opts) {
  const int side = square_side(opts.n);
  const Lattice lattice = Lattice::create(side, side);

  SimulationSettings settings;
  settings.scheme = make_scheme(opts.scheme, opts.c);
  settings.k = opts.k;
  settings.sigma = opts.sigma;
  if (!opts.beta.empty()) {
    if (static_cast<int>(opts.beta.size()) != opts.k) {
      throw std::invalid_argument("--beta needs exactly " + std::to_string(opts.k) + " values");
    }
    settings.beta = Eigen::Map<const Eigen::VectorXd>(opts.beta.data(),
                                                      static_cast<long>(opts.beta.size()));
  }

  Rng rng = make_rng(opts.seed);
  const SarDataset dataset = simulate_dataset(lattice, settings, rng);

  KvPairs header = {
      {"command", "simulate"},       {"scheme", opts.scheme},
      {"c", format_double(opts.c)},  {"n", std::to_string(opts.n)},
      {"k", std::to_string(opts.k)}, {"sigma", format_double(opts.sigma)},
      {"seed", std::to_string(opts.seed)},
  };
  ensure_dir(opts.out);
  write_grid_csv(join_path(opts.out, "data.csv"), dataset, header);
  write_truth_csv(join_path(opts.out, "truth.csv"), truth_from_scheme(settings.scheme),
                  header);
  std::cout << "wrote " << join_path(opts.out, "data.csv") << " and "
            << join_path(opts.out, "truth.csv") << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// fit

struct FitOpts {
  std::string input;
  std::string truth;
  std::string weights = "estimate";
  std::string method = "lasso";
  int m = 24;
  std::string r = "max";
  int r2 = 0;
  double gamma = 0.25;
  int folds = 10;
  std::uint64_t seed = 1;
  int bootstrap = 0;
  int jobs = 0;
  int dense_limit = 4096;
  std::string out = ".";
};

void write_weight_map(const std::string& path, const NeighborhoodTemplate& tmpl,
                      const Eigen::VectorXd& w, const Eigen::VectorXd* boot_mean,
                      const Eigen::VectorXd* boot_se, const KvPairs& header) {
  std::ofstream out = open_output(path);
  write_comment_header(out, header);
  out << "drow,dcol,w";
  if (boot_mean) out << ",boot_mean,boot_se";
  out << "\n";
  // center cell first so the file covers the full window
  out << "0,0,0";
  if (boot_mean) out << ",0,0";
  out << "\n";
  for (int j = 0; j < tmpl.m; ++j) {
    out << tmpl.offsets[j].drow << "," << tmpl.offsets[j].dcol << ","
        << format_double(w[j]);
    if (boot_mean) {
      out << "," << format_double((*boot_mean)[j]) << "," << format_double((*boot_se)[j]);
    }
    out << "\n";
  }
  if (!out) throw ParseError("failed while writing " + path);
}

/// mae / pi0 / pi1 of an estimate against a truth file, on the fit template.
void append_truth_eval(KvPairs& summary, const std::string& truth_path,
                       const NeighborhoodTemplate& tmpl, const Eigen::VectorXd& w_hat) {
  const TruthRecord truth = read_truth_csv(truth_path);
  const Eigen::VectorXd w_true = truth_on_template(truth, tmpl);
  const WeightEval eval = support_stats(w_hat, w_true);
  summary.emplace_back("mae_w", format_double(eval.mae));
  if (eval.specificity) summary.emplace_back("pi0", format_double(*eval.specificity));
  if (eval.sensitivity) summary.emplace_back("pi1", format_double(*eval.sensitivity));
}

int run_fit(const FitOpts& opts) {
  const SarDataset dataset = read_grid_csv(opts.input);
  const int jobs = resolve_jobs(opts.jobs);

  if (opts.method != "lasso" && opts.method != "ml") {
    throw std::invalid_argument("--method must be lasso or ml");
  }
  if (opts.weights != "estimate" && opts.weights != "queen" && opts.weights != "rook") {
    throw std::invalid_argument("--weights must be estimate, queen, or rook");
  }

  KvPairs header = {
      {"command", "fit"},
      {"input", opts.input},
      {"weights", opts.weights},
      {"method", opts.method},
      {"seed", std::to_string(opts.seed)},
  };

  ensure_dir(opts.out);
  const std::string summary_path = join_path(opts.out, "fit_summary.txt");
  const std::string map_path = join_path(opts.out, "weight_map.csv");

  if (opts.method == "ml") {
    if (opts.weights == "estimate") {
      throw std::invalid_argument(
          "--method ml needs a deterministic scheme; use --weights queen or rook");
    }
    if (opts.bootstrap > 0) {
      throw std::invalid_argument("--bootstrap applies to the lasso method only");
    }
    const WeightScheme scheme = make_scheme(opts.weights, 0.5);
    const SparseWeights base =
        unit_row_normalized(build_weights(dataset.lattice, scheme));
    const MlFit fit = ml_fit(dataset, base, opts.dense_limit);

    // structural fitted values: c*W*y + X*beta + intercept
    const Eigen::VectorXd y_hat = fit.c_hat * (base.matrix * dataset.y) +
                                  dataset.x * fit.beta_hat +
                                  Eigen::VectorXd::Constant(dataset.n(), fit.intercept);

    KvPairs summary = header;
    summary.emplace_back("n", std::to_string(dataset.n()));
    summary.emplace_back("k", std::to_string(dataset.k()));
    summary.emplace_back("c_hat", format_double(fit.c_hat));
    summary.emplace_back("c_se", format_double(fit.c_se));
    summary.emplace_back("intercept", format_double(fit.intercept));
    for (int j = 0; j < fit.beta_hat.size(); ++j) {
      summary.emplace_back("beta_" + std::to_string(j + 1), format_double(fit.beta_hat[j]));
      summary.emplace_back("beta_se_" + std::to_string(j + 1),
                           format_double(fit.beta_se[j]));
    }
    summary.emplace_back("sigma2_hat", format_double(fit.sigma2_hat));
    summary.emplace_back("sigma2_se", format_double(fit.sigma2_se));
    summary.emplace_back("loglik", format_double(fit.loglik));
    summary.emplace_back("rmse", format_double(rmse(y_hat, dataset.y)));

    // the weight map is c_hat spread over the scheme's unit template vector
    const NeighborhoodTemplate tmpl = neighbor_template(8);
    const Eigen::VectorXd w_hat =
        2.0 * fit.c_hat * scheme_template_vector(make_scheme(opts.weights, 0.5), tmpl);
    if (!opts.truth.empty()) append_truth_eval(summary, opts.truth, tmpl, w_hat);
    write_kv_file(summary_path, summary);
    write_weight_map(map_path, tmpl, w_hat, nullptr, nullptr, header);
    std::cout << "wrote " << summary_path << " and " << map_path << "\n";
    return 0;
  }

  EstimatorConfig config;
  config.m = opts.m;
  config.r1 = resolve_r_flag(opts.r, dataset.n(), opts.m);
  config.r2 = opts.r2;
  config.gamma = opts.gamma;
  config.folds = opts.folds;
  config.seed = opts.seed;

  header.emplace_back("m", std::to_string(opts.m));
  header.emplace_back("r", std::to_string(config.r1));
  header.emplace_back("gamma", format_double(opts.gamma));
  header.emplace_back("folds", std::to_string(opts.folds));

  const NeighborhoodTemplate tmpl = neighbor_template(opts.m);
  const Fitter fitter =
      opts.weights == "estimate"
          ? Fitter(two_step_fit)
          : Fitter([&](const SarDataset& data, const EstimatorConfig& cfg) {
              return fit_with_fixed_weights(data, make_scheme(opts.weights, 0.5), cfg);
            });

  const TwoStepFit fit = fitter(dataset, config);
  const FittedValues fitted = fitted_values(fit, dataset, tmpl);
  long complete = 0;
  double sq_sum = 0.0;
  for (int i = 0; i < dataset.n(); ++i) {
    if (!fitted.spatial_complete[i]) continue;
    const double e = fitted.y_hat[i] - dataset.y[i];
    sq_sum += e * e;
    ++complete;
  }

  KvPairs summary = header;
  summary.emplace_back("n", std::to_string(dataset.n()));
  summary.emplace_back("k", std::to_string(dataset.k()));
  summary.emplace_back("r2", std::to_string(fit.diagnostics.r2));
  summary.emplace_back("c_hat", format_double(fit.c_hat));
  summary.emplace_back("intercept", format_double(fit.intercept));
  for (int j = 0; j < fit.beta_hat.size(); ++j) {
    summary.emplace_back("beta_" + std::to_string(j + 1), format_double(fit.beta_hat[j]));
  }
  summary.emplace_back("lambda1", format_double(fit.lambda1));
  summary.emplace_back("lambda2", format_double(fit.lambda2));
  if (complete > 0) {
    summary.emplace_back("rmse", format_double(std::sqrt(sq_sum / complete)));
  }
  summary.emplace_back("rmse_sites", std::to_string(complete));

  std::optional<BootstrapResult> boot;
  if (opts.bootstrap > 0) {
    boot = bootstrap(dataset, config, opts.bootstrap, jobs,
                     opts.weights == "estimate" ? Fitter{} : fitter);
    summary.emplace_back("bootstrap", std::to_string(boot->b_requested));
    summary.emplace_back("bootstrap_failures", std::to_string(boot->failures));
    summary.emplace_back("boot_mean_c", format_double(boot->mean_c));
    summary.emplace_back("boot_se_c", format_double(boot->se_c));
    for (int j = 0; j < boot->mean_beta.size(); ++j) {
      summary.emplace_back("boot_mean_beta_" + std::to_string(j + 1),
                           format_double(boot->mean_beta[j]));
      summary.emplace_back("boot_se_beta_" + std::to_string(j + 1),
                           format_double(boot->se_beta[j]));
    }
  }
  if (!opts.truth.empty()) append_truth_eval(summary, opts.truth, tmpl, fit.w_hat);

  write_kv_file(summary_path, summary);
  write_weight_map(map_path, tmpl, fit.w_hat, boot ? &boot->mean_w : nullptr,
                   boot ? &boot->se_w : nullptr, header);
  std::cout << "wrote " << summary_path << " and " << map_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// montecarlo

struct MonteCarloOpts {
  std::vector<std::string> schemes = {"queen", "ese"};
  std::vector<double> c_list = {0.5, 0.7, 0.9};
  std::vector<int> m_list = {24, 48};
  std::vector<std::string> r_list = {"min", "med", "max"};
  int n = 625;
  int k = 1;
  double sigma = 1.0;
  int iterations = 100;
  std::uint64_t seed = 1;
  double gamma = 0.25;
  int folds = 10;
  int jobs = 0;
  std::string out = ".";
};

std::string trim_zeros(const std::string& value) {
  // compact c = 0.5 -> "0.5" style labels for file names
  std::string v = value;
  for (char& ch : v) {
    if (ch == '.') ch = 'p';
  }
  return v;
}

int run_montecarlo(const MonteCarloOpts& opts) {
  const int side = square_side(opts.n);
  const int jobs = resolve_jobs(opts.jobs);
  ensure_dir(opts.out);

  KvPairs header = {
      {"command", "montecarlo"},
      {"n", std::to_string(opts.n)},
      {"k", std::to_string(opts.k)},
      {"iterations", std::to_string(opts.iterations)},
      {"seed", std::to_string(opts.seed)},
      {"gamma", format_double(opts.gamma)},
      {"folds", std::to_string(opts.folds)},
  };

  const std::string summary_path = join_path(opts.out, "montecarlo_summary.csv");
  std::ofstream summary = open_output(summary_path);
  write_comment_header(summary, header);
  summary << "scheme,c,m,r_mode,r,iterations,failures,mae_beta,mae_w,pi0,pi1\n";

  for (const std::string& scheme_name : opts.schemes) {
    for (const double c : opts.c_list) {
      for (const int m : opts.m_list) {
        for (const std::string& r_text : opts.r_list) {
          CellSpec spec;
          spec.scheme = make_scheme(scheme_name, c);
          spec.nrows = side;
          spec.ncols = side;
          spec.k = opts.k;
          spec.sigma = opts.sigma;
          spec.m = m;
          spec.r_mode = parse_r_mode(r_text, &spec.r_explicit);
          spec.iterations = opts.iterations;
          spec.seed = opts.seed;
          spec.gamma = opts.gamma;
          spec.folds = opts.folds;
          spec.jobs = jobs;

          const CellResult cell = run_cell(spec);
          summary << scheme_name << "," << format_double(c) << "," << m << "," << r_text
                  << "," << cell.r << "," << cell.iterations << "," << cell.failures << ","
                  << format_double(cell.mae_beta) << "," << format_double(cell.mae_w) << ","
                  << (cell.pi0 ? format_double(*cell.pi0) : "") << ","
                  << (cell.pi1 ? format_double(*cell.pi1) : "") << "\n";

          const std::string recovery_path = join_path(
              opts.out, "recovery_" + scheme_name + "_c" + trim_zeros(format_double(c)) +
                            "_m" + std::to_string(m) + "_r" + r_text + ".csv");
          std::ofstream recovery = open_output(recovery_path);
          write_comment_header(recovery, header);
          recovery << "drow,dcol,count,total,frequency\n";
          for (int j = 0; j < cell.freq.tmpl.m; ++j) {
            recovery << cell.freq.tmpl.offsets[j].drow << ","
                     << cell.freq.tmpl.offsets[j].dcol << "," << cell.freq.counts[j] << ","
                     << cell.freq.total << ","
                     << format_double(static_cast<double>(cell.freq.counts[j]) /
                                      static_cast<double>(cell.freq.total))
                     << "\n";
          }
          if (!recovery) throw ParseError("failed while writing " + recovery_path);
        }
      }
    }
  }
  if (!summary) throw ParseError("failed while writing " + summary_path);
  std::cout << "wrote " << summary_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// benchmark

struct BenchmarkOpts {
  std::vector<int> n_list = {400, 900, 1600, 2500};
  std::vector<int> m_list = {24, 48};
  int reps = 20;
  double c = 0.5;
  std::uint64_t seed = 1;
  int folds = 10;
  int dense_limit = 4096;
  std::string out = ".";
};

int run_benchmark(const BenchmarkOpts& opts) {
  TimingConfig config;
  config.m_list = opts.m_list;
  config.reps = opts.reps;
  config.c = opts.c;
  config.seed = opts.seed;
  config.folds = opts.folds;
  config.dense_limit = opts.dense_limit;

  const std::vector<TimingRow> rows = timing_comparison(opts.n_list, config);

  ensure_dir(opts.out);
  const std::string path = join_path(opts.out, "benchmark.csv");
  std::ofstream out = open_output(path);
  KvPairs header = {
      {"command", "benchmark"},
      {"reps", std::to_string(opts.reps)},
      {"c", format_double(opts.c)},
      {"seed", std::to_string(opts.seed)},
  };
  write_comment_header(out, header);
  out << "n,method,m,mean_s,sd_s\n";
  for (const TimingRow& row : rows) {
    out << row.n << "," << row.method << "," << row.m << "," << format_double(row.mean_s)
        << "," << format_double(row.sd_s) << "\n";
  }
  if (!out) throw ParseError("failed while writing " + path);
  std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice SAR toolkit: simulate, fit, Monte Carlo, benchmark"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read defaults from a key = value file");

  SimulateOpts sim;
  CLI::App* simulate = app.add_subcommand("simulate", "simulate a SAR sample on a lattice");
  simulate->add_option("--scheme", sim.scheme, "queen | rook | ese")
      ->capture_default_str();
  simulate->add_option("--c", sim.c, "spatial dependence strength in [0, 1)")
      ->capture_default_str();
  simulate->add_option("--n", sim.n, "number of grid cells (perfect square)")
      ->capture_default_str();
  simulate->add_option("--k", sim.k, "number of exogenous regressors")
      ->capture_default_str();
  simulate->add_option("--beta", sim.beta, "regression coefficients (default: all ones)")
      ->delimiter(',');
  simulate->add_option("--sigma", sim.sigma, "noise standard deviation")
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "random seed")->capture_default_str();
  simulate->add_option("--out", sim.out, "output directory")->capture_default_str();

  FitOpts fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit a SAR model to a grid CSV file");
  fit_cmd->add_option("--input", fit.input, "grid CSV file (row,col,y,x1,...)")
      ->required();
  fit_cmd->add_option("--truth", fit.truth,
                      "truth CSV; adds mae/pi0/pi1 of the estimate to the summary");
  fit_cmd->add_option("--weights", fit.weights, "estimate | queen | rook")
      ->capture_default_str();
  fit_cmd->add_option("--method", fit.method, "lasso | ml")->capture_default_str();
  fit_cmd->add_option("--m", fit.m, "number of potential neighbors")->capture_default_str();
  fit_cmd->add_option("--r", fit.r, "replications: min | med | max | <count>")
      ->capture_default_str();
  fit_cmd->add_option("--r2", fit.r2, "second-step replications (0 = automatic)")
      ->capture_default_str();
  fit_cmd->add_option("--gamma", fit.gamma, "adaptive weight exponent")
      ->capture_default_str();
  fit_cmd->add_option("--folds", fit.folds, "cross-validation folds")
      ->capture_default_str();
  fit_cmd->add_option("--seed", fit.seed, "random seed")->capture_default_str();
  fit_cmd->add_option("--bootstrap", fit.bootstrap, "bootstrap iterations (0 = off)")
      ->capture_default_str();
  fit_cmd->add_option("--jobs", fit.jobs,
                      "parallel bootstrap jobs (default: LATTICE_SAR_JOBS or 1)");
  fit_cmd->add_option("--dense-limit", fit.dense_limit,
                      "largest n for the dense ML eigen solver")
      ->capture_default_str();
  fit_cmd->add_option("--out", fit.out, "output directory")->capture_default_str();

  MonteCarloOpts mc;
  CLI::App* mc_cmd =
      app.add_subcommand("montecarlo", "simulate -> fit -> metrics over a cell grid");
  mc_cmd->add_option("--scheme", mc.schemes, "generating schemes (queen, rook, ese)")
      ->delimiter(',')
      ->capture_default_str();
  mc_cmd->add_option("--c", mc.c_list, "dependence strengths")
      ->delimiter(',')
      ->capture_default_str();
  mc_cmd->add_option("--m", mc.m_list, "potential neighbor counts")
      ->delimiter(',')
      ->capture_default_str();
  mc_cmd->add_option("--r", mc.r_list, "replication modes (min, med, max, or counts)")
      ->delimiter(',')
      ->capture_default_str();
  mc_cmd->add_option("--n", mc.n, "number of grid cells (perfect square)")
      ->capture_default_str();
  mc_cmd->add_option("--k", mc.k, "number of exogenous regressors")->capture_default_str();
  mc_cmd->add_option("--sigma", mc.sigma, "noise standard deviation")
      ->capture_default_str();
  mc_cmd->add_option("--iterations", mc.iterations, "Monte Carlo iterations per cell")
      ->capture_default_str();
  mc_cmd->add_option("--seed", mc.seed, "random seed")->capture_default_str();
  mc_cmd->add_option("--gamma", mc.gamma, "adaptive weight exponent")
      ->capture_default_str();
  mc_cmd->add_option("--folds", mc.folds, "cross-validation folds")->capture_default_str();
  mc_cmd->add_option("--jobs", mc.jobs,
                     "parallel iterations (default: LATTICE_SAR_JOBS or 1)");
  mc_cmd->add_option("--out", mc.out, "output directory")->capture_default_str();

  BenchmarkOpts bench;
  CLI::App* bench_cmd =
      app.add_subcommand("benchmark", "time the two-step estimator against ML");
  bench_cmd->add_option("--n", bench.n_list, "grid sizes (perfect squares)")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--m", bench.m_list, "potential neighbor counts")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--reps", bench.reps, "repetitions per measurement")
      ->capture_default_str();
  bench_cmd->add_option("--c", bench.c, "queen dependence strength of the timing data")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "random seed")->capture_default_str();
  bench_cmd->add_option("--folds", bench.folds, "cross-validation folds")
      ->capture_default_str();
  bench_cmd->add_option("--dense-limit", bench.dense_limit,
                        "largest n for the dense ML eigen solver")
      ->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (fit_cmd->parsed()) return run_fit(fit);
    if (mc_cmd->parsed()) return run_montecarlo(mc);
    return run_benchmark(bench);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const CapabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
