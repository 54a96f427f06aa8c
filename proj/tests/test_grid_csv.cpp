#include "latsar/grid_csv.hpp"

#include <gtest/gtest.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "latsar/errors.hpp"
#include "latsar/rng.hpp"

namespace latsar {
namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("latsar_csv_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  std::filesystem::path dir_;
};

using GridCsv = TempDir;
using TruthCsv = TempDir;

SarDataset sample_dataset(std::uint64_t seed = 3) {
  const Lattice g = Lattice::create(6, 5);
  SimulationSettings settings;
  settings.scheme = WeightScheme::queen(0.5);
  settings.k = 2;
  Rng rng = make_rng(seed);
  return simulate_dataset(g, settings, rng);
}

TEST(FormatDouble, RoundTripsExactly) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 3.0, 123456.789, 1e300, -4.45e-308}) {
    const std::string text = format_double(v);
    double parsed = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), parsed);
    ASSERT_EQ(ec, std::errc());
    ASSERT_EQ(ptr, text.data() + text.size());
    EXPECT_EQ(parsed, v) << text;
  }
}

TEST_F(GridCsv, WriteReadRoundTripIsExact) {
  const SarDataset data = sample_dataset();
  const std::string file = path("data.csv");
  write_grid_csv(file, data, {{"command", "test"}, {"seed", "3"}});
  const SarDataset back = read_grid_csv(file);

  EXPECT_EQ(back.lattice.nrows, 6);
  EXPECT_EQ(back.lattice.ncols, 5);
  EXPECT_EQ(back.k(), 2);
  ASSERT_EQ(back.y.size(), data.y.size());
  for (int i = 0; i < data.n(); ++i) {
    EXPECT_EQ(back.y[i], data.y[i]) << "site " << i;
    for (int j = 0; j < data.k(); ++j) EXPECT_EQ(back.x(i, j), data.x(i, j));
  }
  // Readers do not invent generating-process metadata.
  EXPECT_FALSE(back.true_scheme.has_value());
}

TEST_F(GridCsv, AcceptsCommentsAndShuffledRecords) {
  std::istringstream in(
      "# a comment\n"
      "row,col,y,x1\n"
      "1,1,4.0,0.4\n"
      "\n"
      "0,1,2.0,0.2\n"
      "# another comment\n"
      "1,0,3.0,0.3\n"
      "0,0,1.0,0.1\n");
  const SarDataset data = read_grid_csv(in, "inline");
  EXPECT_EQ(data.lattice.nrows, 2);
  EXPECT_EQ(data.lattice.ncols, 2);
  EXPECT_DOUBLE_EQ(data.y[data.lattice.site(0, 0)], 1.0);
  EXPECT_DOUBLE_EQ(data.y[data.lattice.site(1, 1)], 4.0);
  EXPECT_DOUBLE_EQ(data.x(data.lattice.site(1, 0), 0), 0.3);
}

TEST_F(GridCsv, RejectsMalformedInput) {
  const auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_grid_csv(in, "inline");
  };

  // Wrong header.
  EXPECT_THROW(parse("row,col,value\n0,0,1\n"), ParseError);
  // Missing record: a 2x2 grid needs four rows.
  EXPECT_THROW(parse("row,col,y,x1\n0,0,1,1\n1,1,2,2\n0,1,3,3\n"), ParseError);
  // Duplicate cell.
  try {
    parse(
        "row,col,y,x1\n"
        "0,0,1,1\n"
        "0,1,2,2\n"
        "1,0,3,3\n"
        "0,0,4,4\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos);
  }
  // Non-numeric fields carry the offending line number.
  try {
    parse("row,col,y,x1\n0,0,oops,1\n0,1,2,2\n1,0,3,3\n1,1,4,4\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  // Negative coordinates.
  EXPECT_THROW(parse("row,col,y,x1\n-1,0,1,1\n"), ParseError);
  // Wrong field count in a record.
  EXPECT_THROW(parse("row,col,y,x1\n0,0,1\n"), ParseError);
}

TEST_F(GridCsv, MissingFileThrowsParseError) {
  EXPECT_THROW(read_grid_csv(path("absent.csv")), ParseError);
}

TEST_F(TruthCsv, NamedSchemeRoundTrip) {
  const TruthRecord truth = truth_from_scheme(WeightScheme::anisotropic_ese(0.9));
  EXPECT_EQ(truth.scheme, "ese");
  EXPECT_DOUBLE_EQ(truth.c, 0.9);
  ASSERT_EQ(truth.offsets.size(), 2u);
  EXPECT_DOUBLE_EQ(truth.w[0], 0.45);

  const std::string file = path("truth.csv");
  write_truth_csv(file, truth);
  const TruthRecord back = read_truth_csv(file);
  EXPECT_EQ(back.scheme, truth.scheme);
  EXPECT_EQ(back.c, truth.c);
  ASSERT_EQ(back.offsets.size(), truth.offsets.size());
  for (std::size_t i = 0; i < truth.offsets.size(); ++i) {
    EXPECT_EQ(back.offsets[i], truth.offsets[i]);
    EXPECT_EQ(back.w[i], truth.w[i]);
  }
}

TEST_F(TruthCsv, VectorSchemeKeepsNonZeroEntriesOnly) {
  const NeighborhoodTemplate t = neighbor_template(24);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(24);
  w[t.position({0, 1})] = 0.4;
  w[t.position({2, 2})] = 0.25;
  const TruthRecord truth = truth_from_scheme(WeightScheme::from_vector(t, w));
  EXPECT_EQ(truth.scheme, "vector");
  EXPECT_NEAR(truth.c, 0.65, 1e-15);
  EXPECT_EQ(truth.offsets.size(), 2u);

  const Eigen::VectorXd dense = truth_on_template(truth, t);
  EXPECT_DOUBLE_EQ(dense[t.position({0, 1})], 0.4);
  EXPECT_DOUBLE_EQ(dense[t.position({2, 2})], 0.25);
  EXPECT_NEAR(dense.lpNorm<1>(), 0.65, 1e-15);

  // The m=8 template cannot hold the (2,2) offset.
  EXPECT_THROW(truth_on_template(truth, neighbor_template(8)), ConstraintError);
}

TEST_F(TruthCsv, RejectsCorruptFiles) {
  const std::string file = path("bad.csv");
  {
    std::ofstream out(file);
    out << "scheme,martian\nc,0.5\ndrow,dcol,w\n";
  }
  EXPECT_THROW(read_truth_csv(file), ParseError);
  {
    std::ofstream out(file);
    out << "scheme,queen\nc,0.5\ndrow,dcol,w\n0,1,not_a_number\n";
  }
  EXPECT_THROW(read_truth_csv(file), ParseError);
}

TEST_F(GridCsv, KvFilesUseKeyEqualsValueLines) {
  const std::string file = path("summary.txt");
  write_kv_file(file, {{"n", "625"}, {"c_hat", format_double(0.45)}});
  std::ifstream in(file);
  std::string line1, line2;
  std::getline(in, line1);
  std::getline(in, line2);
  EXPECT_EQ(line1, "n = 625");
  EXPECT_EQ(line2, "c_hat = 0.45");
}

}  // namespace
}  // namespace latsar
