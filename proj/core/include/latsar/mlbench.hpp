#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "latsar/estimator.hpp"
#include "latsar/simulate.hpp"

namespace latsar {

/// Maximum-likelihood SAR fit under a fixed row-standardized weight matrix.
struct MlFit {
  double c_hat = 0.0;
  double intercept = 0.0;
  Eigen::VectorXd beta_hat;
  double sigma2_hat = 0.0;
  double loglik = 0.0;
  double c_se = 0.0;
  double intercept_se = 0.0;
  Eigen::VectorXd beta_se;
  double sigma2_se = 0.0;
};

/// Precomputed spectral data of a base matrix, reusable across fits on the
/// same lattice (the eigen decomposition dominates the cost).
struct MlContext {
  SparseWeights base;           // unit row sums
  Eigen::VectorXd eig_real;     // real parts, all eigenvalues
  Eigen::VectorXd eig_imag;     // imaginary parts (zero for symmetric-similar bases)
  double c_lo = 0.0;            // feasible interval for c
  double c_hi = 0.0;

  /// Dense eigen decomposition of the base; throws CapabilityError above
  /// `dense_limit` rows.
  static MlContext prepare(const SparseWeights& base, int dense_limit = 4096);
};

/// Maximize the likelihood of Y = c*W*Y + X*beta + eps over c by
/// concentrating out beta and sigma^2; the log-determinant comes from the
/// precomputed eigenvalues. Standard errors are inverse observed-information
/// estimates from numerical second differences. Includes an intercept.
MlFit ml_fit(const SarDataset& dataset, const MlContext& context);
MlFit ml_fit(const SarDataset& dataset, const SparseWeights& base, int dense_limit = 4096);

/// Full log-likelihood at (c, beta, sigma2) for a given context — exposed so
/// tests can check the optimum against grids.
double sar_loglik(const SarDataset& dataset, const MlContext& context, double c,
                  const Eigen::VectorXd& beta, double intercept, double sigma2);

/// Concentrated log-likelihood profile in c (beta, sigma2 maximized out).
double sar_profile_loglik(const SarDataset& dataset, const MlContext& context, double c);

struct TimingRow {
  int n = 0;
  std::string method;  // "twostep" or "ml"
  int m = 0;           // 0 for ml
  double mean_s = 0.0;
  double sd_s = 0.0;
};

struct TimingConfig {
  std::vector<int> m_list = {24, 48};
  int reps = 20;
  double c = 0.5;             // queen truth used to generate the timing data
  std::uint64_t seed = 1;
  int folds = 10;
  int dense_limit = 4096;
};

/// Mean/sd wall-clock seconds of the two-step estimator (per m) and the ML
/// benchmark on freshly simulated queen data for each grid size.
std::vector<TimingRow> timing_comparison(const std::vector<int>& n_list,
                                         const TimingConfig& config);

}  // namespace latsar
