#include "latsar/simulate.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "latsar/errors.hpp"
#include "latsar/rng.hpp"

namespace latsar {
namespace {

Eigen::MatrixXd dense(const SparseWeights& w) { return Eigen::MatrixXd(w.matrix); }

TEST(Schemes, OffsetsAreCanonical) {
  const std::vector<Offset> queen = scheme_offsets(SchemeKind::Queen);
  ASSERT_EQ(queen.size(), 8u);
  EXPECT_EQ(queen, neighbor_template(8).offsets);

  const std::vector<Offset> rook = scheme_offsets(SchemeKind::Rook);
  const std::vector<Offset> want_rook = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};
  EXPECT_EQ(rook, want_rook);

  const std::vector<Offset> ese = scheme_offsets(SchemeKind::AnisotropicEse);
  const std::vector<Offset> want_ese = {{0, 1}, {1, 1}};
  EXPECT_EQ(ese, want_ese);
}

TEST(Schemes, StrengthMustStayBelowOne) {
  EXPECT_NO_THROW(WeightScheme::queen(0.0));
  EXPECT_NO_THROW(WeightScheme::queen(0.999));
  EXPECT_THROW(WeightScheme::queen(1.0), ConstraintError);
  EXPECT_THROW(WeightScheme::rook(-0.1), ConstraintError);
}

TEST(BuildWeights, QueenInteriorRowsCarryEqualShares) {
  const Lattice g = Lattice::create(25, 25);
  const SparseWeights w = build_weights(g, WeightScheme::queen(0.5));
  const Eigen::MatrixXd m = dense(w);
  EXPECT_EQ(m.rows(), 625);
  EXPECT_DOUBLE_EQ(m.diagonal().cwiseAbs().maxCoeff(), 0.0);

  const int s = g.site(12, 12);
  for (const Offset& o : scheme_offsets(SchemeKind::Queen)) {
    EXPECT_DOUBLE_EQ(m(s, g.site(12 + o.drow, 12 + o.dcol)), 0.0625);
  }
  EXPECT_NEAR(m.row(s).sum(), 0.5, 1e-15);
}

TEST(BuildWeights, BorderRowsRenormalizeOverExistingNeighbors) {
  const Lattice g = Lattice::create(25, 25);
  const SparseWeights w = build_weights(g, WeightScheme::queen(0.5));
  const Eigen::MatrixXd m = dense(w);
  // A corner has three queen neighbors; each carries 0.5/3.
  const int corner = g.site(0, 0);
  EXPECT_NEAR(m(corner, g.site(0, 1)), 0.5 / 3, 1e-15);
  EXPECT_NEAR(m.row(corner).sum(), 0.5, 1e-12);
  // Every row sums to the full strength: some neighbor always exists.
  const Eigen::VectorXd sums = row_sums(w);
  EXPECT_NEAR(sums.minCoeff(), 0.5, 1e-12);
  EXPECT_NEAR(sums.maxCoeff(), 0.5, 1e-12);
}

TEST(BuildWeights, AnisotropicRowsVanishWhereNoNeighborExists) {
  const Lattice g = Lattice::create(25, 25);
  const SparseWeights w = build_weights(g, WeightScheme::anisotropic_ese(0.9));
  const Eigen::MatrixXd m = dense(w);
  const int s = g.site(10, 10);
  EXPECT_DOUBLE_EQ(m(s, g.site(10, 11)), 0.45);
  EXPECT_DOUBLE_EQ(m(s, g.site(11, 11)), 0.45);
  // The east edge keeps no east/south-east neighbor at all.
  EXPECT_DOUBLE_EQ(dense(w).row(g.site(10, 24)).sum(), 0.0);
  // The south edge keeps only the east neighbor.
  EXPECT_DOUBLE_EQ(m.row(g.site(24, 10)).sum(), 0.9);
}

TEST(WeightsFromVector, ValidatesTheVector) {
  const Lattice g = Lattice::create(9, 9);
  const NeighborhoodTemplate t = neighbor_template(8);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(8);
  w[2] = 0.4;
  w[7] = 0.3;
  EXPECT_NO_THROW(weights_from_vector(g, t, w));

  Eigen::VectorXd negative = w;
  negative[0] = -0.01;
  EXPECT_THROW(weights_from_vector(g, t, negative), ConstraintError);

  Eigen::VectorXd heavy = w;
  heavy[0] = 0.4;  // total 1.1
  EXPECT_THROW(weights_from_vector(g, t, heavy), ConstraintError);

  EXPECT_THROW(weights_from_vector(g, t, Eigen::VectorXd::Zero(5)), std::invalid_argument);
}

TEST(WeightsFromVector, PlacesWeightsOverTheTemplateWindow) {
  const Lattice g = Lattice::create(9, 9);
  const NeighborhoodTemplate t = neighbor_template(8);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(8);
  w[t.position({0, 1})] = 0.4;
  w[t.position({1, 1})] = 0.3;
  const Eigen::MatrixXd m = dense(weights_from_vector(g, t, w));
  const int s = g.site(4, 4);
  EXPECT_DOUBLE_EQ(m(s, g.site(4, 5)), 0.4);
  EXPECT_DOUBLE_EQ(m(s, g.site(5, 5)), 0.3);
  EXPECT_DOUBLE_EQ(m.row(s).sum(), 0.7);
  // Entries falling outside the grid are dropped, not renormalized.
  EXPECT_DOUBLE_EQ(m.row(g.site(4, 8)).sum(), 0.0);
  EXPECT_DOUBLE_EQ(m.row(g.site(8, 4)).sum(), 0.4);
}

TEST(SchemeTemplateVector, EmbedsNamedSchemes) {
  const NeighborhoodTemplate t = neighbor_template(24);
  const Eigen::VectorXd queen = scheme_template_vector(WeightScheme::queen(0.5), t);
  ASSERT_EQ(queen.size(), 24);
  double total = 0.0;
  for (const Offset& o : scheme_offsets(SchemeKind::Queen)) {
    EXPECT_DOUBLE_EQ(queen[t.position(o)], 0.0625);
    total += queen[t.position(o)];
  }
  EXPECT_DOUBLE_EQ(total, 0.5);
  EXPECT_DOUBLE_EQ(queen.lpNorm<1>(), 0.5);

  const Eigen::VectorXd ese = scheme_template_vector(WeightScheme::anisotropic_ese(0.9), t);
  EXPECT_DOUBLE_EQ(ese[t.position({0, 1})], 0.45);
  EXPECT_DOUBLE_EQ(ese[t.position({1, 1})], 0.45);
  EXPECT_DOUBLE_EQ(ese.lpNorm<1>(), 0.9);
}

TEST(SchemeTemplateVector, RejectsOffsetsOutsideTheTemplate) {
  const NeighborhoodTemplate big = neighbor_template(24);
  const NeighborhoodTemplate small = neighbor_template(8);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(24);
  w[big.position({0, 2})] = 0.3;
  const WeightScheme scheme = WeightScheme::from_vector(big, w);
  EXPECT_NO_THROW(scheme_template_vector(scheme, big));
  EXPECT_THROW(scheme_template_vector(scheme, small), ConstraintError);
}

TEST(UnitRowNormalized, RescalesNonEmptyRows) {
  const Lattice g = Lattice::create(9, 9);
  const SparseWeights w = build_weights(g, WeightScheme::anisotropic_ese(0.9));
  const SparseWeights unit = unit_row_normalized(w);
  const Eigen::VectorXd sums = row_sums(unit);
  for (int i = 0; i < unit.n; ++i) {
    if (sums[i] != 0.0) EXPECT_NEAR(sums[i], 1.0, 1e-12) << i;
  }
  // Zero rows stay zero.
  EXPECT_DOUBLE_EQ(sums[g.site(4, 8)], 0.0);
}

TEST(GenerateDesign, StandardNormalMoments) {
  Rng rng = make_rng(17);
  const Eigen::MatrixXd x = generate_design(5000, 2, rng);
  ASSERT_EQ(x.rows(), 5000);
  ASSERT_EQ(x.cols(), 2);
  const double n = 10000.0;
  const double mean = x.mean();
  const double var = (x.array() - mean).square().sum() / (n - 1);
  EXPECT_LT(std::abs(mean), 5.0 / std::sqrt(n));            // 5 standard errors
  EXPECT_LT(std::abs(var - 1.0), 5.0 * std::sqrt(2.0 / n));
  EXPECT_THROW(generate_design(0, 1, rng), std::invalid_argument);
}

TEST(SolveSar, MatchesTheNeumannSeries) {
  const Lattice g = Lattice::create(10, 10);
  const SparseWeights w = build_weights(g, WeightScheme::queen(0.5));
  Rng rng = make_rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd rhs(g.n);
  for (int i = 0; i < g.n; ++i) rhs[i] = gauss(rng);

  const Eigen::VectorXd direct = solve_sar(w, rhs);

  Eigen::VectorXd series = rhs;
  Eigen::VectorXd term = rhs;
  for (int t = 0; t < 60; ++t) {
    term = w.matrix * term;
    series += term;
  }
  EXPECT_LT((direct - series).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(SolveSar, ResidualIsTiny) {
  const Lattice g = Lattice::create(50, 50);
  const SparseWeights w = build_weights(g, WeightScheme::queen(0.9));
  Rng rng = make_rng(4);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd rhs(g.n);
  for (int i = 0; i < g.n; ++i) rhs[i] = gauss(rng);
  const Eigen::VectorXd y = solve_sar(w, rhs);
  const Eigen::VectorXd resid = rhs - (y - w.matrix * y);
  EXPECT_LT(resid.norm() / rhs.norm(), 1e-10);
}

TEST(SimulateSar, RejectsRowSumsReachingOne) {
  const Lattice g = Lattice::create(5, 5);
  const NeighborhoodTemplate t = neighbor_template(8);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(8);
  w[0] = 0.999999;
  SparseWeights sw = weights_from_vector(g, t, w);
  sw.matrix *= 1.2;  // push row sums past 1 behind the constructor's back
  Rng rng = make_rng(1);
  const Eigen::MatrixXd x = generate_design(g.n, 1, rng);
  EXPECT_THROW(simulate_sar(sw, x, Eigen::VectorXd::Ones(1), 1.0, rng), ConstraintError);
}

TEST(SimulateSar, NoiselessResponseSolvesTheSystem) {
  const Lattice g = Lattice::create(12, 12);
  const SparseWeights w = build_weights(g, WeightScheme::rook(0.7));
  Rng rng = make_rng(9);
  const Eigen::MatrixXd x = generate_design(g.n, 2, rng);
  Eigen::VectorXd beta(2);
  beta << 1.0, -0.5;
  const Eigen::VectorXd y = simulate_sar(w, x, beta, 0.0, rng);
  const Eigen::VectorXd reference = solve_sar(w, x * beta);
  EXPECT_LT((y - reference).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(SimulateDataset, AttachesTruthAndIsSeedDeterministic) {
  const Lattice g = Lattice::create(15, 15);
  SimulationSettings settings;
  settings.scheme = WeightScheme::anisotropic_ese(0.8);
  settings.k = 2;
  settings.sigma = 0.5;

  Rng rng1 = make_rng(42);
  const SarDataset a = simulate_dataset(g, settings, rng1);
  Rng rng2 = make_rng(42);
  const SarDataset b = simulate_dataset(g, settings, rng2);

  EXPECT_EQ(a.n(), 225);
  EXPECT_EQ(a.k(), 2);
  ASSERT_TRUE(a.true_scheme.has_value());
  EXPECT_EQ(a.true_scheme->kind, SchemeKind::AnisotropicEse);
  ASSERT_TRUE(a.beta_true.has_value());
  EXPECT_EQ(a.beta_true->size(), 2);
  EXPECT_DOUBLE_EQ((*a.beta_true)[0], 1.0);
  ASSERT_TRUE(a.sigma.has_value());
  EXPECT_DOUBLE_EQ(*a.sigma, 0.5);

  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.x, b.x);

  Rng rng3 = make_rng(43);
  const SarDataset c = simulate_dataset(g, settings, rng3);
  EXPECT_NE(a.y, c.y);
}

TEST(SimulateDataset, TinyNoiseTracksTheReducedForm) {
  const Lattice g = Lattice::create(10, 10);
  SimulationSettings settings;
  settings.scheme = WeightScheme::queen(0.6);
  settings.sigma = 1e-8;
  Rng rng = make_rng(7);
  const SarDataset data = simulate_dataset(g, settings, rng);
  const SparseWeights w = build_weights(g, settings.scheme);
  const Eigen::VectorXd expected = solve_sar(w, data.x * *data.beta_true);
  EXPECT_LT((data.y - expected).cwiseAbs().maxCoeff(), 1e-6);
}

}  // namespace
}  // namespace latsar
