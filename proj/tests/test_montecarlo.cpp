#include "latsar/montecarlo.hpp"

#include <gtest/gtest.h>

#include "latsar/errors.hpp"

namespace latsar {
namespace {

TEST(ParseRMode, NamedModesAndExplicitCounts) {
  EXPECT_EQ(parse_r_mode("min"), RMode::Min);
  EXPECT_EQ(parse_r_mode("med"), RMode::Med);
  EXPECT_EQ(parse_r_mode("max"), RMode::Max);

  int value = 0;
  EXPECT_EQ(parse_r_mode("400", &value), RMode::Explicit);
  EXPECT_EQ(value, 400);
  EXPECT_EQ(parse_r_mode("30", &value), RMode::Explicit);
  EXPECT_EQ(value, 30);

  EXPECT_THROW(parse_r_mode("bogus"), std::invalid_argument);
  EXPECT_THROW(parse_r_mode("0"), std::invalid_argument);
  EXPECT_THROW(parse_r_mode("-5"), std::invalid_argument);
  EXPECT_THROW(parse_r_mode("4x0"), std::invalid_argument);
  EXPECT_THROW(parse_r_mode(""), std::invalid_argument);
}

TEST(ParseRMode, NamesRoundTrip) {
  EXPECT_EQ(r_mode_name(RMode::Min), "min");
  EXPECT_EQ(r_mode_name(RMode::Med), "med");
  EXPECT_EQ(r_mode_name(RMode::Max), "max");
  EXPECT_EQ(parse_r_mode(r_mode_name(RMode::Med)), RMode::Med);
}

TEST(ResolveReplications, UsesTheLatticeGeometry) {
  CellSpec spec;
  spec.scheme = WeightScheme::queen(0.5);
  spec.m = 24;

  spec.r_mode = RMode::Min;
  EXPECT_EQ(resolve_replications(spec), 30);
  spec.r_mode = RMode::Med;
  EXPECT_EQ(resolve_replications(spec), 215);
  spec.r_mode = RMode::Max;
  EXPECT_EQ(resolve_replications(spec), 400);
  spec.r_mode = RMode::Explicit;
  spec.r_explicit = 77;
  EXPECT_EQ(resolve_replications(spec), 77);

  spec.r_explicit = 0;
  EXPECT_THROW(resolve_replications(spec), std::invalid_argument);

  spec.r_mode = RMode::Max;
  spec.nrows = 24;  // 24x25 is not square
  EXPECT_THROW(resolve_replications(spec), std::invalid_argument);
}

CellSpec tiny_cell() {
  CellSpec spec;
  spec.scheme = WeightScheme::anisotropic_ese(0.8);
  spec.nrows = 15;
  spec.ncols = 15;
  spec.m = 8;
  spec.r_mode = RMode::Explicit;
  spec.r_explicit = 60;
  spec.iterations = 4;
  spec.seed = 5;
  return spec;
}

TEST(RunCell, AveragesMetricsOverIterations) {
  const CellResult result = run_cell(tiny_cell());
  EXPECT_EQ(result.r, 60);
  EXPECT_EQ(result.iterations, 4);
  EXPECT_EQ(result.failures, 0);
  EXPECT_GE(result.mae_beta, 0.0);
  EXPECT_GE(result.mae_w, 0.0);
  ASSERT_TRUE(result.pi0.has_value());
  ASSERT_TRUE(result.pi1.has_value());
  EXPECT_GE(*result.pi0, 0.0);
  EXPECT_LE(*result.pi0, 1.0);
  EXPECT_GE(*result.pi1, 0.0);
  EXPECT_LE(*result.pi1, 1.0);
  EXPECT_EQ(result.freq.total, 4);
  ASSERT_EQ(result.freq.counts.size(), 8u);
  for (int count : result.freq.counts) {
    EXPECT_GE(count, 0);
    EXPECT_LE(count, 4);
  }
}

TEST(RunCell, ResultsDoNotDependOnTheJobCount) {
  CellSpec spec = tiny_cell();
  spec.jobs = 1;
  const CellResult serial = run_cell(spec);
  spec.jobs = 3;
  const CellResult threaded = run_cell(spec);
  EXPECT_EQ(serial.failures, threaded.failures);
  EXPECT_EQ(serial.mae_beta, threaded.mae_beta);
  EXPECT_EQ(serial.mae_w, threaded.mae_w);
  EXPECT_EQ(*serial.pi0, *threaded.pi0);
  EXPECT_EQ(*serial.pi1, *threaded.pi1);
  EXPECT_EQ(serial.freq.counts, threaded.freq.counts);
}

TEST(RunCell, SeedChangesTheDraw) {
  CellSpec spec = tiny_cell();
  const CellResult a = run_cell(spec);
  spec.seed = 6;
  const CellResult b = run_cell(spec);
  EXPECT_NE(a.mae_w, b.mae_w);
}

TEST(RunCell, ValidatesTheSpec) {
  CellSpec spec = tiny_cell();
  spec.iterations = 0;
  EXPECT_THROW(run_cell(spec), std::invalid_argument);

  spec = tiny_cell();
  spec.r_explicit = 10;  // below 3 per fold
  EXPECT_THROW(run_cell(spec), std::invalid_argument);
}

}  // namespace
}  // namespace latsar
