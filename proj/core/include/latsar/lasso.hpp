#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "latsar/rng.hpp"

namespace latsar {

/// Per-coefficient penalty configuration. psi entries are >= 0; +infinity
/// freezes a coefficient at exactly zero. An empty lambda_grid means "derive
/// the default grid from the data" (100 log-spaced values from lambda_max
/// down to 1e-4 * lambda_max).
struct PenaltySpec {
  Eigen::VectorXd psi;
  double gamma = 1.0;
  std::vector<double> lambda_grid;
};

/// l1-ball constraint over a masked coefficient subset: sum of the masked
/// coefficients' magnitudes must not exceed `bound`.
struct L1Ball {
  std::vector<bool> mask;
  double bound = 1.0 - 1e-6;
};

struct ConstraintSpec {
  std::vector<bool> nonneg_mask;  // empty => no sign constraints
  std::optional<L1Ball> l1_ball;
};

struct SolverControl {
  bool intercept = true;
  double tol = 1e-7;      // max coordinate change per sweep, standardized scale
  int max_sweeps = 10000;
  double kkt_tol = 1e-5;  // stationarity tolerance, standardized scale

  /// Called after every sweep with the current penalized objective (including
  /// the ball multiplier term), which is non-increasing within one (lambda,
  /// mu) run. For instrumentation and tests; leave empty in production runs.
  std::function<void(double lambda, double mu, int sweep, double objective)> sweep_observer;
};

/// One point of the regularization path. Coefficients are on the original
/// scale; `objective` is ||y - A b - b0||^2 + lambda * ||psi .* b||_1.
struct LassoFit {
  double lambda = 0.0;
  Eigen::VectorXd coef;
  double intercept = 0.0;
  double objective = 0.0;
  double kkt_violation = 0.0;
  int n_iter = 0;
  double ball_multiplier = 0.0;  // Lagrange multiplier of the l1 ball (0 if slack)
};

/// sign(z) * max(|z| - t, 0).
double soft_threshold(double z, double t);

/// Adaptive penalty weights 1/|prior|^gamma; priors below 1e-8 in magnitude
/// map to +infinity (frozen at zero).
Eigen::VectorXd adaptive_weights(const Eigen::VectorXd& prior, double gamma);

/// Pilot coefficients for the adaptive weights: OLS when the columns are
/// fewer than the rows and the normal matrix is well-conditioned, otherwise
/// ridge with penalty 1e-3 * mean(diag(A'A)). With `intercept` the data are
/// centered first and the returned vector excludes the intercept.
Eigen::VectorXd prior_estimate(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                               bool intercept = false);

/// Smallest lambda at which every penalized coefficient is zero.
double lambda_max(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                  const PenaltySpec& penalty, const ConstraintSpec& constraints,
                  bool intercept);

/// count log-spaced values from lambda_max down to ratio * lambda_max.
std::vector<double> make_lambda_grid(double lambda_max, int count = 100, double ratio = 1e-4);

/// Cyclic coordinate descent over a descending lambda grid with warm starts.
/// Minimizes ||y - A b||^2 + lambda * ||psi .* b||_1 subject to the sign and
/// l1-ball constraints; the ball is enforced exactly through its Lagrange
/// multiplier. Throws ConvergenceError when a path point exhausts
/// max_sweeps.
std::vector<LassoFit> solve_path(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                                 const PenaltySpec& penalty, const ConstraintSpec& constraints,
                                 const SolverControl& control = {});

/// Shuffled balanced fold labels in [0, folds): sizes differ by at most one.
std::vector<int> fold_assignment(int rows, int folds, Rng& rng);

struct CvResult {
  double best_lambda = 0.0;
  LassoFit fit;                      // refit on all rows at best_lambda
  std::vector<double> lambda_grid;   // grid shared across folds
  std::vector<double> cv_error;      // mean held-out squared error per lambda
};

/// K-fold cross-validation over a shared lambda grid (derived from the full
/// data when penalty.lambda_grid is empty). Ties prefer the larger lambda.
CvResult cross_validate(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                        const PenaltySpec& penalty, const ConstraintSpec& constraints,
                        int folds, Rng& rng, const SolverControl& control = {});

}  // namespace latsar
