#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "latsar/estimator.hpp"
#include "latsar/metrics.hpp"
#include "latsar/simulate.hpp"

namespace latsar {

enum class RMode { Min, Med, Max, Explicit };

/// "min" / "med" / "max", or a positive integer (mode Explicit, value stored
/// through r_explicit when given).
RMode parse_r_mode(const std::string& text, int* r_explicit = nullptr);
std::string r_mode_name(RMode mode);

/// One Monte Carlo cell: a generating scheme crossed with estimator knobs.
struct CellSpec {
  WeightScheme scheme;
  int nrows = 25;
  int ncols = 25;
  int k = 1;
  double sigma = 1.0;
  Eigen::VectorXd beta;  // empty => ones(k)

  int m = 24;
  RMode r_mode = RMode::Max;
  int r_explicit = 0;
  int iterations = 100;
  std::uint64_t seed = 1;
  double gamma = 0.25;
  int folds = 10;
  int jobs = 1;
  SolverControl solver;
};

/// Per-cell averages over successful iterations.
struct CellResult {
  int r = 0;           // resolved first-step replication count
  int iterations = 0;  // requested
  int failures = 0;
  double mae_beta = 0.0;
  double mae_w = 0.0;
  std::optional<double> pi0;  // missing when the truth has no zero weights
  std::optional<double> pi1;  // missing when the truth has no non-zero weights
  FrequencyMap freq;
};

/// Resolve the replication count for a cell from its r mode.
int resolve_replications(const CellSpec& spec);

/// iterations x {simulate -> two_step_fit -> metrics}, iteration i seeded by
/// mix_seed(seed, i) so results are independent of the job count. Failed
/// iterations are counted and excluded from the averages.
CellResult run_cell(const CellSpec& spec);

}  // namespace latsar
