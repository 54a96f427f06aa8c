#include "latsar/mlbench.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "latsar/errors.hpp"
#include "latsar/rng.hpp"

namespace latsar {
namespace {

SarDataset queen_dataset(int side, double c, double sigma, std::uint64_t seed) {
  const Lattice g = Lattice::create(side, side);
  SimulationSettings settings;
  settings.scheme = WeightScheme::queen(c);
  settings.sigma = sigma;
  Rng rng = make_rng(seed);
  return simulate_dataset(g, settings, rng);
}

SparseWeights unit_queen(int side) {
  const Lattice g = Lattice::create(side, side);
  return unit_row_normalized(build_weights(g, WeightScheme::queen(0.5)));
}

TEST(MlContext, PrepareChecksRowNormalization) {
  const Lattice g = Lattice::create(10, 10);
  const SparseWeights raw = build_weights(g, WeightScheme::queen(0.5));
  EXPECT_THROW(MlContext::prepare(raw), std::invalid_argument);
  EXPECT_NO_THROW(MlContext::prepare(unit_row_normalized(raw)));
}

TEST(MlContext, DenseLimitGuardsTheEigendecomposition) {
  const SparseWeights base = unit_queen(10);
  EXPECT_THROW(MlContext::prepare(base, 50), CapabilityError);
  EXPECT_NO_THROW(MlContext::prepare(base, 100));
}

TEST(MlContext, IntervalBracketsTheUnitEigenvalue) {
  const MlContext ctx = MlContext::prepare(unit_queen(10));
  // A row-stochastic matrix has spectral radius one, so the admissible
  // interval reaches up to about 1 and below some negative value.
  EXPECT_NEAR(ctx.c_hi, 1.0, 1e-8);
  EXPECT_LT(ctx.c_lo, -0.3);
  EXPECT_EQ(ctx.eig_real.size(), 100);
}

TEST(MlContext, EigenvaluesReproduceTheDenseLogDeterminant) {
  const int side = 10;
  const SparseWeights base = unit_queen(side);
  const MlContext ctx = MlContext::prepare(base);
  const Eigen::MatrixXd dense(base.matrix);
  for (double c : {-0.5, 0.0, 0.3, 0.8, 0.95}) {
    const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(base.n, base.n) - c * dense;
    const double expected = Eigen::FullPivLU<Eigen::MatrixXd>(m)
                                .matrixLU()
                                .diagonal()
                                .array()
                                .abs()
                                .log()
                                .sum();
    double logdet = 0.0;
    for (int i = 0; i < ctx.eig_real.size(); ++i) {
      const double re = 1.0 - c * ctx.eig_real[i];
      const double im = c * ctx.eig_imag[i];
      logdet += 0.5 * std::log(re * re + im * im);
    }
    EXPECT_NEAR(logdet, expected, 1e-8) << c;
  }
}

TEST(MlFit, RecoversStrengthAndCoefficients) {
  const SarDataset data = queen_dataset(15, 0.5, 0.5, 5);
  const MlContext ctx = MlContext::prepare(unit_queen(15));
  const MlFit fit = ml_fit(data, ctx);
  // The unit-normalized base makes the interior weight c/8 per neighbor, so
  // the estimated strength matches the generating c directly.
  EXPECT_NEAR(fit.c_hat, 0.5, 0.15);
  EXPECT_NEAR(fit.beta_hat[0], 1.0, 0.2);
  EXPECT_NEAR(fit.sigma2_hat, 0.25, 0.12);
  EXPECT_TRUE(std::isfinite(fit.loglik));
  EXPECT_GT(fit.c_se, 0.0);
  EXPECT_GT(fit.sigma2_se, 0.0);
  EXPECT_TRUE(std::isfinite(fit.intercept));
  EXPECT_TRUE(std::isfinite(fit.intercept_se));
  EXPECT_EQ(fit.beta_se.size(), 1);
}

TEST(MlFit, OptimizerBeatsAFineGrid) {
  const SarDataset data = queen_dataset(15, 0.7, 1.0, 6);
  const MlContext ctx = MlContext::prepare(unit_queen(15));
  const MlFit fit = ml_fit(data, ctx);

  const double span = ctx.c_hi - ctx.c_lo;
  double best_grid = -std::numeric_limits<double>::infinity();
  double best_c = 0.0;
  const int points = 500;
  for (int i = 1; i < points; ++i) {
    const double c = ctx.c_lo + span * i / points;
    const double value = sar_profile_loglik(data, ctx, c);
    if (value > best_grid) {
      best_grid = value;
      best_c = c;
    }
  }
  const double at_hat = sar_profile_loglik(data, ctx, fit.c_hat);
  EXPECT_GE(at_hat, best_grid - 1e-6);
  EXPECT_NEAR(fit.c_hat, best_c, span / points * 2);
}

TEST(MlFit, ProfileAndFullLikelihoodAgreeAtTheOptimum) {
  const SarDataset data = queen_dataset(12, 0.6, 0.8, 7);
  const MlContext ctx = MlContext::prepare(unit_queen(12));
  const MlFit fit = ml_fit(data, ctx);
  const double profile = sar_profile_loglik(data, ctx, fit.c_hat);
  const double full =
      sar_loglik(data, ctx, fit.c_hat, fit.beta_hat, fit.intercept, fit.sigma2_hat);
  EXPECT_NEAR(profile, full, 1e-8);
  EXPECT_NEAR(fit.loglik, full, 1e-8);

  // Moving away from the maximizer lowers the likelihood.
  EXPECT_LT(sar_profile_loglik(data, ctx, fit.c_hat + 0.15), profile);
  EXPECT_LT(sar_profile_loglik(data, ctx, fit.c_hat - 0.15), profile);
}

TEST(MlFit, ValidatesShapes) {
  const SarDataset data = queen_dataset(10, 0.5, 1.0, 8);
  const MlContext ctx = MlContext::prepare(unit_queen(10));
  SarDataset wrong = data;
  wrong.y = Eigen::VectorXd::Ones(50);
  EXPECT_THROW(ml_fit(wrong, ctx), std::invalid_argument);
  EXPECT_THROW(sar_loglik(data, ctx, 0.5, Eigen::VectorXd::Ones(3), 0.0, 1.0),
               std::invalid_argument);
}

TEST(TimingComparison, ProducesOneRowPerMethod) {
  TimingConfig config;
  config.m_list = {8};
  config.reps = 2;
  config.seed = 3;
  const std::vector<TimingRow> rows = timing_comparison({225}, config);
  ASSERT_EQ(rows.size(), 2u);  // two-step with m=8, plus ML
  for (const TimingRow& row : rows) {
    EXPECT_EQ(row.n, 225);
    EXPECT_GT(row.mean_s, 0.0);
    EXPECT_GE(row.sd_s, 0.0);
  }
  EXPECT_EQ(rows[0].method, "twostep");
  EXPECT_EQ(rows[0].m, 8);
  EXPECT_EQ(rows[1].method, "ml");

  EXPECT_THROW(timing_comparison({200}, config), std::invalid_argument);  // not square
}

}  // namespace
}  // namespace latsar
