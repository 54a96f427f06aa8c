#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "latsar/lasso.hpp"
#include "latsar/resample.hpp"
#include "latsar/simulate.hpp"

namespace latsar {

struct EstimatorConfig {
  int m = 24;
  int r1 = 0;  // 0 => all eligible first-step sites
  int r2 = 0;  // 0 => min(r1, eligible second-step sites)
  // Adaptive-weight exponent. The pilot coefficients of the second-step
  // design are noisy because neighboring predictions are strongly
  // collinear; a small exponent keeps the per-coefficient penalties from
  // amplifying that noise and freezing true small weights out of the fit.
  double gamma = 0.25;
  int folds = 10;
  std::uint64_t seed = 0;
  bool intercept = true;
  bool sample_with_replacement = false;  // bootstrap turns this on
  SolverControl solver;
};

struct FitDiagnostics {
  int r1 = 0;
  int r2 = 0;
  int n_iter1 = 0;
  int n_iter2 = 0;
  double kkt1 = 0.0;
  double kkt2 = 0.0;
  std::vector<double> cv_error1;
  std::vector<double> cv_error2;
};

/// Result of the two-step pipeline. w_hat lives on the m-template in
/// canonical order; c_hat = ||w_hat||_1 is the estimated dependence strength.
struct TwoStepFit {
  Eigen::VectorXd theta_hat;  // l = k*(m+1)
  double theta_intercept = 0.0;
  Eigen::VectorXd beta_hat;   // k
  Eigen::VectorXd w_hat;      // m
  double intercept = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double c_hat = 0.0;
  FitDiagnostics diagnostics;
};

/// Step 1: instrument regression at r1 resampled sites (adaptive lasso,
/// cross-validated) giving predicted responses on the interior. Step 2:
/// constrained adaptive lasso of the response on [X, neighbor predictions]
/// at r2 resampled sites, with w >= 0 and ||w||_1 < 1.
TwoStepFit two_step_fit(const SarDataset& dataset, const EstimatorConfig& config);

/// Same pipeline, but the second step regresses on the single composite
/// regressor built from a fixed row-standardized scheme (queen/rook), so only
/// the scalar strength c and beta are estimated. w_hat is c times the
/// scheme's unit template vector.
TwoStepFit fit_with_fixed_weights(const SarDataset& dataset, const WeightScheme& scheme,
                                  const EstimatorConfig& config);

using Fitter = std::function<TwoStepFit(const SarDataset&, const EstimatorConfig&)>;

struct BootstrapResult {
  int b_requested = 0;
  int failures = 0;
  Eigen::VectorXd mean_w, se_w;
  Eigen::VectorXd mean_beta, se_beta;
  double mean_c = 0.0;
  double se_c = 0.0;
  std::vector<TwoStepFit> fits;  // successful iterations, in order
};

/// One bootstrap iteration: the fit is rerun with fresh site draws (with
/// replacement) under the given seed.
TwoStepFit bootstrap_iteration(const SarDataset& dataset, const EstimatorConfig& config,
                               std::uint64_t iteration_seed, const Fitter& fitter = {});

/// Mean and sample standard deviation of every coefficient over iterations.
BootstrapResult summarize_bootstrap(std::vector<TwoStepFit> fits, int b_requested,
                                    int failures);

/// B independent iterations (parallel up to `jobs`); failed iterations are
/// dropped and counted. `fitter` defaults to two_step_fit.
BootstrapResult bootstrap(const SarDataset& dataset, const EstimatorConfig& config, int b,
                          int jobs = 1, const Fitter& fitter = {});

/// Expand the estimated weight vector into the full n x n matrix.
SparseWeights reconstruct_weights(const TwoStepFit& fit, const Lattice& lattice,
                                  const NeighborhoodTemplate& tmpl);

/// Per-site fitted values X*beta + intercept + sum_j w_j * ypred(neighbor j).
/// Sites missing a prediction at some neighbor with w_j != 0 carry the
/// exogenous part only and are flagged incomplete.
struct FittedValues {
  Eigen::VectorXd y_hat;              // length n
  std::vector<bool> spatial_complete; // length n
};

FittedValues fitted_values(const TwoStepFit& fit, const SarDataset& dataset,
                           const NeighborhoodTemplate& tmpl);

}  // namespace latsar
