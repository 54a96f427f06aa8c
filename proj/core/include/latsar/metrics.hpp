#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "latsar/lattice.hpp"

namespace latsar {

/// Support-recovery statistics of one weight estimate against the truth.
/// specificity is missing when the truth has no zero entries; sensitivity is
/// missing when it has no non-zero entries.
struct WeightEval {
  double mae = 0.0;
  std::optional<double> specificity;  // TN / (TN + FP)
  std::optional<double> sensitivity;  // TP / (TP + FN)
  std::vector<bool> support_hat;
  std::vector<bool> support_true;
};

/// How often each template cell was identified as non-zero across fits.
struct FrequencyMap {
  NeighborhoodTemplate tmpl;
  std::vector<int> counts;  // length m
  int total = 0;
};

inline constexpr double kDefaultZeroTol = 1e-10;

/// Mean absolute error m^{-1} ||w_hat - w_true||_1.
double mae(const Eigen::VectorXd& w_hat, const Eigen::VectorXd& w_true);

WeightEval support_stats(const Eigen::VectorXd& w_hat, const Eigen::VectorXd& w_true,
                         double zero_tol = kDefaultZeroTol);

FrequencyMap recovery_frequency(const std::vector<Eigen::VectorXd>& fits,
                                const NeighborhoodTemplate& tmpl,
                                double zero_tol = kDefaultZeroTol);

/// n^{-1/2} ||y_hat - y||_2.
double rmse(const Eigen::VectorXd& y_hat, const Eigen::VectorXd& y);

}  // namespace latsar
