// Micro-benchmarks for the hot paths: the coordinate-descent lasso path, the
// sparse SAR solve, the likelihood profile machinery, and the full two-step
// pipeline at the standard Monte Carlo size.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <random>

#include "latsar/estimator.hpp"
#include "latsar/lasso.hpp"
#include "latsar/mlbench.hpp"
#include "latsar/rng.hpp"
#include "latsar/simulate.hpp"

namespace {

using namespace latsar;

/// Gaussian regression instance shaped like a second estimation step:
/// `rows` resampled sites, `p` candidate weights, sparse truth.
struct DenseInstance {
  Eigen::MatrixXd a;
  Eigen::VectorXd y;
  PenaltySpec penalty;
};

DenseInstance make_instance(int rows, int p) {
  Rng rng = make_rng(42);
  std::normal_distribution<double> gauss;
  DenseInstance inst;
  inst.a.resize(rows, p);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < p; ++j) inst.a(i, j) = gauss(rng);
  }
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (int j = 0; j < p; j += 5) beta[j] = 0.5;
  inst.y = inst.a * beta;
  for (int i = 0; i < rows; ++i) inst.y[i] += 0.5 * gauss(rng);
  inst.penalty.psi = Eigen::VectorXd::Ones(p);
  return inst;
}

void BM_LassoPath(benchmark::State& state) {
  const DenseInstance inst =
      make_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_path(inst.a, inst.y, inst.penalty, {}));
  }
}
BENCHMARK(BM_LassoPath)->Args({400, 25})->Args({324, 49})->Unit(benchmark::kMillisecond);

void BM_SarSolve(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Lattice g = Lattice::create(side, side);
  const SparseWeights w = build_weights(g, WeightScheme::queen(0.9));
  Rng rng = make_rng(7);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd rhs(g.n);
  for (int i = 0; i < g.n; ++i) rhs[i] = gauss(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_sar(w, rhs));
  }
}
BENCHMARK(BM_SarSolve)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_MlPrepare(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Lattice g = Lattice::create(side, side);
  const SparseWeights base = unit_row_normalized(build_weights(g, WeightScheme::queen(0.5)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(MlContext::prepare(base));
  }
}
BENCHMARK(BM_MlPrepare)->Arg(25)->Unit(benchmark::kMillisecond);

void BM_MlFit(benchmark::State& state) {
  const Lattice g = Lattice::create(25, 25);
  SimulationSettings settings;
  settings.scheme = WeightScheme::queen(0.5);
  Rng rng = make_rng(3);
  const SarDataset data = simulate_dataset(g, settings, rng);
  const MlContext context =
      MlContext::prepare(unit_row_normalized(build_weights(g, settings.scheme)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ml_fit(data, context));
  }
}
BENCHMARK(BM_MlFit)->Unit(benchmark::kMillisecond);

void BM_TwoStepFit(benchmark::State& state) {
  const Lattice g = Lattice::create(25, 25);
  SimulationSettings settings;
  settings.scheme = WeightScheme::anisotropic_ese(0.9);
  Rng rng = make_rng(3);
  const SarDataset data = simulate_dataset(g, settings, rng);
  EstimatorConfig config;
  config.m = static_cast<int>(state.range(0));
  config.seed = 5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(two_step_fit(data, config));
  }
}
BENCHMARK(BM_TwoStepFit)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
