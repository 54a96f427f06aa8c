#pragma once

#include <Eigen/Dense>
#include <vector>

#include "latsar/lattice.hpp"
#include "latsar/rng.hpp"
#include "latsar/simulate.hpp"

namespace latsar {

enum class ResampleStage { FirstStep, SecondStep };

/// Border ring a stage needs: the template ring for the first step, twice
/// that for the second (every neighbor must itself carry a first-step
/// prediction).
int stage_ring(const NeighborhoodTemplate& tmpl, ResampleStage stage);

/// Sites eligible for sampling at the given stage.
std::vector<int> eligible_sites(const Lattice& lattice, const NeighborhoodTemplate& tmpl,
                                ResampleStage stage);

/// Selected sample sites plus the template/stage they were drawn for.
struct ResamplePlan {
  std::vector<int> sites;
  NeighborhoodTemplate tmpl;
  ResampleStage stage = ResampleStage::FirstStep;

  int r() const { return static_cast<int>(sites.size()); }
};

/// The three replication counts used in the simulation study.
struct ReplicationCounts {
  int r_min = 0;
  int r_med = 0;
  int r_max = 0;
};

/// r_min = 30, r_max = (sqrt(n) - sqrt(m+1))^2, r_med = floor of their mean.
/// Requires n and m+1 perfect squares and r_max >= 30.
ReplicationCounts replication_counts(int n, int m);

/// Uniform draw of r sites from `eligible`; without replacement by default
/// (the bootstrap passes with_replacement = true).
std::vector<int> draw_sites(const std::vector<int>& eligible, int r, bool with_replacement,
                            Rng& rng);

/// Distinct uniform sample of r eligible sites as a plan.
ResamplePlan sample_sites(const std::vector<int>& eligible, int r,
                          const NeighborhoodTemplate& tmpl, ResampleStage stage, Rng& rng);

/// Wrap externally drawn sites (possibly with duplicates) after validating
/// each is interior for the stage ring.
ResamplePlan plan_from_sites(const Lattice& lattice, std::vector<int> sites,
                             const NeighborhoodTemplate& tmpl, ResampleStage stage);

/// First-step regression data: response at the sampled sites and the
/// instrument matrix Z with l = k*(m+1) columns — own-site regressors first,
/// then per template neighbor, per regressor.
struct FirstStepDesign {
  Eigen::VectorXd y;  // r
  Eigen::MatrixXd z;  // r x l
};

FirstStepDesign build_first_step(const SarDataset& dataset, const ResamplePlan& plan);

/// First-step predictions over the whole lattice; `valid[s]` marks sites
/// whose instrument window is complete.
struct PredictedField {
  Eigen::VectorXd value;    // length n
  std::vector<bool> valid;  // length n
};

/// y_pred(s) = intercept + z(s)' theta on every site interior for the
/// template ring.
PredictedField predict_endogenous(const Eigen::VectorXd& theta, double intercept,
                                  const SarDataset& dataset,
                                  const NeighborhoodTemplate& tmpl);

/// Second-step regression data: response, exogenous block, and the matrix of
/// predicted responses at each site's template neighbors.
struct SecondStepDesign {
  Eigen::VectorXd y;       // r
  Eigen::MatrixXd x;       // r x k
  Eigen::MatrixXd ybreve;  // r x m, template order
};

SecondStepDesign build_second_step(const SarDataset& dataset, const PredictedField& predicted,
                                   const ResamplePlan& plan);

}  // namespace latsar
