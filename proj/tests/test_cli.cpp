// End-to-end tests driving the installed command line binary as a subprocess.
// The binary path is injected by the build as LATSAR_CLI_PATH.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "latsar/grid_csv.hpp"

#ifndef LATSAR_CLI_PATH
#error "LATSAR_CLI_PATH must point at the lattice_sar binary"
#endif

namespace latsar {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("latsar_cli_" + std::string(
                                ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  /// Runs the binary with `args`, discarding its output; returns the exit code.
  int run(const std::string& args) const {
    const std::string cmd =
        std::string("\"") + LATSAR_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status < 0) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::map<std::string, std::string> read_kv(const std::string& file) {
    std::map<std::string, std::string> kv;
    std::ifstream in(file);
    std::string line;
    while (std::getline(in, line)) {
      const auto pos = line.find(" = ");
      if (pos == std::string::npos) continue;
      kv[line.substr(0, pos)] = line.substr(pos + 3);
    }
    return kv;
  }

  static std::string read_file(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
  }

  /// Non-comment data lines of a CSV file, header included.
  static std::vector<std::string> csv_lines(const std::string& file) {
    std::vector<std::string> lines;
    std::ifstream in(file);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      lines.push_back(line);
    }
    return lines;
  }

 private:
  fs::path dir_;
};

TEST_F(Cli, SimulateWritesParsableDataAndTruth) {
  ASSERT_EQ(run("simulate --n 100 --scheme ese --c 0.8 --k 2 --seed 7 --out " + path("sim")),
            0);
  const SarDataset data = read_grid_csv(path("sim/data.csv"));
  EXPECT_EQ(data.n(), 100);
  EXPECT_EQ(data.k(), 2);

  const TruthRecord truth = read_truth_csv(path("sim/truth.csv"));
  EXPECT_EQ(truth.scheme, "ese");
  EXPECT_DOUBLE_EQ(truth.c, 0.8);
  ASSERT_EQ(truth.offsets.size(), 2u);
  EXPECT_DOUBLE_EQ(truth.w[0], 0.4);
}

TEST_F(Cli, SimulateIsDeterministicPerSeed) {
  ASSERT_EQ(run("simulate --n 100 --seed 7 --out " + path("a")), 0);
  ASSERT_EQ(run("simulate --n 100 --seed 7 --out " + path("b")), 0);
  ASSERT_EQ(run("simulate --n 100 --seed 8 --out " + path("c")), 0);
  EXPECT_EQ(read_file(path("a/data.csv")), read_file(path("b/data.csv")));
  EXPECT_NE(read_file(path("a/data.csv")), read_file(path("c/data.csv")));
}

TEST_F(Cli, FitEstimateProducesSummaryAndWeightMap) {
  ASSERT_EQ(run("simulate --n 225 --scheme ese --c 0.8 --sigma 0.5 --seed 3 --out " +
                path("sim")),
            0);
  ASSERT_EQ(run("fit --input " + path("sim/data.csv") + " --truth " + path("sim/truth.csv") +
                " --m 8 --r max --folds 5 --seed 2 --out " + path("fit")),
            0);

  const auto kv = read_kv(path("fit/fit_summary.txt"));
  for (const char* key :
       {"c_hat", "intercept", "beta_1", "lambda1", "lambda2", "rmse", "mae_w", "pi0", "pi1"}) {
    EXPECT_TRUE(kv.count(key)) << "missing summary key " << key;
  }
  EXPECT_EQ(kv.at("n"), "225");
  // The estimate lives inside the model constraints.
  const double c_hat = std::stod(kv.at("c_hat"));
  EXPECT_GE(c_hat, 0.0);
  EXPECT_LT(c_hat, 1.0);

  // Weight map: header, center cell, then one record per template offset.
  const std::vector<std::string> lines = csv_lines(path("fit/weight_map.csv"));
  ASSERT_EQ(lines.size(), 10u);
  EXPECT_EQ(lines[0], "drow,dcol,w");
  EXPECT_EQ(lines[1], "0,0,0");
}

TEST_F(Cli, FitMlProducesSummary) {
  ASSERT_EQ(run("simulate --n 225 --scheme queen --c 0.5 --seed 9 --out " + path("sim")), 0);
  ASSERT_EQ(run("fit --input " + path("sim/data.csv") +
                " --method ml --weights queen --out " + path("fit")),
            0);
  const auto kv = read_kv(path("fit/fit_summary.txt"));
  for (const char* key : {"c_hat", "c_se", "beta_1", "beta_se_1", "sigma2_hat", "loglik"}) {
    EXPECT_TRUE(kv.count(key)) << "missing summary key " << key;
  }
  // Generous sanity window around the generating strength.
  const double c_hat = std::stod(kv.at("c_hat"));
  EXPECT_NEAR(c_hat, 0.5, 0.25);
}

TEST_F(Cli, MonteCarloWritesSummaryAndRecoveryTables) {
  ASSERT_EQ(run("montecarlo --scheme ese --c 0.8 --m 8 --r 60 --n 225 --iterations 2 "
                "--seed 4 --folds 5 --out " +
                path("mc")),
            0);

  const std::vector<std::string> summary = csv_lines(path("mc/montecarlo_summary.csv"));
  ASSERT_EQ(summary.size(), 2u);
  EXPECT_EQ(summary[0], "scheme,c,m,r_mode,r,iterations,failures,mae_beta,mae_w,pi0,pi1");
  EXPECT_EQ(summary[1].rfind("ese,0.8,8,60,60,2,0,", 0), 0u) << summary[1];

  const std::vector<std::string> recovery =
      csv_lines(path("mc/recovery_ese_c0p8_m8_r60.csv"));
  ASSERT_EQ(recovery.size(), 9u);  // header + one row per m=8 offset
  EXPECT_EQ(recovery[0], "drow,dcol,count,total,frequency");
  for (std::size_t i = 1; i < recovery.size(); ++i) {
    EXPECT_NE(recovery[i].find(",2,"), std::string::npos) << recovery[i];
  }
}

TEST_F(Cli, ExitCodesDistinguishErrorClasses) {
  // Data errors: unreadable and malformed inputs.
  EXPECT_EQ(run("fit --input " + path("absent.csv")), 3);
  {
    std::ofstream out(path("bogus.csv"));
    out << "not,a,grid\n1,2,3\n";
  }
  EXPECT_EQ(run("fit --input " + path("bogus.csv")), 3);

  // Configuration errors: unknown flags and inconsistent option combinations.
  EXPECT_EQ(run("simulate --bogus"), 2);
  ASSERT_EQ(run("simulate --n 100 --out " + path("sim")), 0);
  EXPECT_EQ(run("fit --input " + path("sim/data.csv") + " --method ml --weights estimate"),
            2);
  EXPECT_EQ(run("simulate --n 17"), 2);  // not a perfect square
}

TEST_F(Cli, ConfigFileSuppliesDefaultsAndFlagsWin) {
  {
    std::ofstream out(path("cfg.ini"));
    out << "[simulate]\nc = 0.9\nseed = 11\n";
  }
  ASSERT_EQ(run("--config " + path("cfg.ini") + " simulate --n 100 --scheme ese --out " +
                path("a")),
            0);
  EXPECT_DOUBLE_EQ(read_truth_csv(path("a/truth.csv")).c, 0.9);

  // An explicit flag beats the config value; the config seed still applies.
  ASSERT_EQ(run("--config " + path("cfg.ini") + " simulate --n 100 --scheme ese --c 0.3 "
                "--out " +
                path("b")),
            0);
  EXPECT_DOUBLE_EQ(read_truth_csv(path("b/truth.csv")).c, 0.3);

  ASSERT_EQ(run("simulate --n 100 --scheme ese --c 0.9 --seed 11 --out " + path("c")), 0);
  EXPECT_EQ(read_file(path("a/data.csv")), read_file(path("c/data.csv")));
}

}  // namespace
}  // namespace latsar
