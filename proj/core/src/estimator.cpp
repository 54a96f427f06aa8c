#include "latsar/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "latsar/errors.hpp"
#include "latsar/parallel.hpp"

namespace latsar {

namespace {

constexpr double kBallBound = 1.0 - 1e-6;  // realizes the strict ||w||_1 < 1

void validate_config(const SarDataset& dataset, const EstimatorConfig& config) {
  if (dataset.n() < 1 || dataset.k() < 1) {
    throw std::invalid_argument("dataset must carry a response and at least one regressor");
  }
  if (dataset.y.size() != dataset.n() || dataset.x.rows() != dataset.n()) {
    throw std::invalid_argument("dataset vectors do not match the lattice size");
  }
  if (config.folds < 2) throw std::invalid_argument("folds must be at least 2");
  if (!(config.gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
}

int resolve_stage_count(int requested, int eligible, int min_required, bool with_replacement,
                        const char* stage) {
  const int r = requested > 0 ? requested : eligible;
  if (r < min_required) {
    throw std::invalid_argument(std::string(stage) + " replication count " +
                                std::to_string(r) + " is below the minimum of " +
                                std::to_string(min_required) +
                                " (3 observations per fold)");
  }
  if (!with_replacement && r > eligible) {
    throw std::invalid_argument(std::string(stage) + " replication count " +
                                std::to_string(r) + " exceeds the " +
                                std::to_string(eligible) + " eligible sites");
  }
  return r;
}

SolverControl stage_control(const EstimatorConfig& config) {
  SolverControl control = config.solver;
  control.intercept = config.intercept;
  return control;
}

struct StageOne {
  NeighborhoodTemplate tmpl;
  CvResult cv;
  PredictedField predicted;
  int r1 = 0;
};

StageOne run_first_step(const SarDataset& dataset, const EstimatorConfig& config) {
  StageOne stage;
  stage.tmpl = neighbor_template(config.m);
  const std::vector<int> eligible =
      eligible_sites(dataset.lattice, stage.tmpl, ResampleStage::FirstStep);
  stage.r1 = resolve_stage_count(config.r1, static_cast<int>(eligible.size()),
                                 3 * config.folds, config.sample_with_replacement,
                                 "first-step");

  Rng site_rng = make_rng(config.seed, 1);
  const ResamplePlan plan =
      config.sample_with_replacement
          ? plan_from_sites(dataset.lattice,
                            draw_sites(eligible, stage.r1, true, site_rng), stage.tmpl,
                            ResampleStage::FirstStep)
          : sample_sites(eligible, stage.r1, stage.tmpl, ResampleStage::FirstStep, site_rng);
  const FirstStepDesign design = build_first_step(dataset, plan);

  const Eigen::VectorXd prior = prior_estimate(design.z, design.y, config.intercept);
  PenaltySpec penalty;
  penalty.psi = adaptive_weights(prior, config.gamma);
  penalty.gamma = config.gamma;

  Rng cv_rng = make_rng(config.seed, 2);
  stage.cv = cross_validate(design.z, design.y, penalty, ConstraintSpec{}, config.folds,
                            cv_rng, stage_control(config));
  stage.predicted =
      predict_endogenous(stage.cv.fit.coef, stage.cv.fit.intercept, dataset, stage.tmpl);
  return stage;
}

CvResult run_second_step(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                         int n_exog, const EstimatorConfig& config) {
  const int p = static_cast<int>(design.cols());
  const Eigen::VectorXd prior = prior_estimate(design, response, config.intercept);
  PenaltySpec penalty;
  penalty.psi = adaptive_weights(prior, config.gamma);
  penalty.gamma = config.gamma;

  ConstraintSpec constraints;
  constraints.nonneg_mask.assign(p, false);
  L1Ball ball;
  ball.mask.assign(p, false);
  ball.bound = kBallBound;
  for (int j = n_exog; j < p; ++j) {
    constraints.nonneg_mask[j] = true;  // w >= 0
    ball.mask[j] = true;                // ||w||_1 < 1
  }
  constraints.l1_ball = ball;

  Rng cv_rng = make_rng(config.seed, 4);
  return cross_validate(design, response, penalty, constraints, config.folds, cv_rng,
                        stage_control(config));
}

Fitter default_fitter() {
  return [](const SarDataset& dataset, const EstimatorConfig& config) {
    return two_step_fit(dataset, config);
  };
}

}  // namespace

TwoStepFit two_step_fit(const SarDataset& dataset, const EstimatorConfig& config) {
  validate_config(dataset, config);
  StageOne stage = run_first_step(dataset, config);

  const std::vector<int> eligible =
      eligible_sites(dataset.lattice, stage.tmpl, ResampleStage::SecondStep);
  const int r2_default = std::min(stage.r1, static_cast<int>(eligible.size()));
  const int r2 = resolve_stage_count(config.r2 > 0 ? config.r2 : r2_default,
                                     static_cast<int>(eligible.size()), 3 * config.folds,
                                     config.sample_with_replacement, "second-step");

  Rng site_rng = make_rng(config.seed, 3);
  const ResamplePlan plan =
      config.sample_with_replacement
          ? plan_from_sites(dataset.lattice, draw_sites(eligible, r2, true, site_rng),
                            stage.tmpl, ResampleStage::SecondStep)
          : sample_sites(eligible, r2, stage.tmpl, ResampleStage::SecondStep, site_rng);
  const SecondStepDesign design = build_second_step(dataset, stage.predicted, plan);

  const int k = dataset.k();
  const int m = stage.tmpl.m;
  Eigen::MatrixXd full(design.y.size(), k + m);
  full << design.x, design.ybreve;
  const CvResult cv2 = run_second_step(full, design.y, k, config);

  TwoStepFit fit;
  fit.theta_hat = stage.cv.fit.coef;
  fit.theta_intercept = stage.cv.fit.intercept;
  fit.beta_hat = cv2.fit.coef.head(k);
  fit.w_hat = cv2.fit.coef.tail(m);
  fit.intercept = cv2.fit.intercept;
  fit.lambda1 = stage.cv.best_lambda;
  fit.lambda2 = cv2.best_lambda;
  fit.c_hat = fit.w_hat.sum();  // w >= 0, so the sum is the l1 norm
  fit.diagnostics.r1 = stage.r1;
  fit.diagnostics.r2 = r2;
  fit.diagnostics.n_iter1 = stage.cv.fit.n_iter;
  fit.diagnostics.n_iter2 = cv2.fit.n_iter;
  fit.diagnostics.kkt1 = stage.cv.fit.kkt_violation;
  fit.diagnostics.kkt2 = cv2.fit.kkt_violation;
  fit.diagnostics.cv_error1 = stage.cv.cv_error;
  fit.diagnostics.cv_error2 = cv2.cv_error;
  return fit;
}

TwoStepFit fit_with_fixed_weights(const SarDataset& dataset, const WeightScheme& scheme,
                                  const EstimatorConfig& config) {
  validate_config(dataset, config);
  StageOne stage = run_first_step(dataset, config);

  const SparseWeights base = unit_row_normalized(build_weights(dataset.lattice, scheme));

  // A site qualifies when every base neighbor carries a first-step prediction,
  // so the composite regressor g(s) = sum_j base(s,j) * ypred(j) is complete.
  std::vector<int> eligible;
  for (int site = 0; site < dataset.n(); ++site) {
    bool complete = true;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(base.matrix, site);
         it; ++it) {
      if (!stage.predicted.valid[it.col()]) {
        complete = false;
        break;
      }
    }
    if (complete) eligible.push_back(site);
  }

  const int r2_default = std::min(stage.r1, static_cast<int>(eligible.size()));
  const int r2 = resolve_stage_count(config.r2 > 0 ? config.r2 : r2_default,
                                     static_cast<int>(eligible.size()), 3 * config.folds,
                                     config.sample_with_replacement, "second-step");
  Rng site_rng = make_rng(config.seed, 3);
  const std::vector<int> sites =
      draw_sites(eligible, r2, config.sample_with_replacement, site_rng);

  const int k = dataset.k();
  Eigen::MatrixXd design(r2, k + 1);
  Eigen::VectorXd response(r2);
  for (int i = 0; i < r2; ++i) {
    const int site = sites[i];
    response[i] = dataset.y[site];
    design.block(i, 0, 1, k) = dataset.x.row(site);
    double g = 0.0;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(base.matrix, site);
         it; ++it) {
      g += it.value() * stage.predicted.value[it.col()];
    }
    design(i, k) = g;
  }
  const CvResult cv2 = run_second_step(design, response, k, config);

  // report c times the scheme's unit-strength template vector as w_hat
  const double c_hat = cv2.fit.coef[k];
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(stage.tmpl.m);
  if (scheme.kind == SchemeKind::FromVector) {
    const double norm = scheme.w.sum();
    if (norm > 0.0) unit = scheme_template_vector(scheme, stage.tmpl) / norm;
  } else {
    const std::vector<Offset> offsets = scheme_offsets(scheme.kind);
    for (const Offset& o : offsets) {
      const int pos = stage.tmpl.position(o);
      if (pos < 0) throw ConstraintError("scheme offset falls outside the fit template");
      unit[pos] = 1.0 / static_cast<double>(offsets.size());
    }
  }

  TwoStepFit fit;
  fit.theta_hat = stage.cv.fit.coef;
  fit.theta_intercept = stage.cv.fit.intercept;
  fit.beta_hat = cv2.fit.coef.head(k);
  fit.w_hat = c_hat * unit;
  fit.intercept = cv2.fit.intercept;
  fit.lambda1 = stage.cv.best_lambda;
  fit.lambda2 = cv2.best_lambda;
  fit.c_hat = c_hat;
  fit.diagnostics.r1 = stage.r1;
  fit.diagnostics.r2 = r2;
  fit.diagnostics.n_iter1 = stage.cv.fit.n_iter;
  fit.diagnostics.n_iter2 = cv2.fit.n_iter;
  fit.diagnostics.kkt1 = stage.cv.fit.kkt_violation;
  fit.diagnostics.kkt2 = cv2.fit.kkt_violation;
  fit.diagnostics.cv_error1 = stage.cv.cv_error;
  fit.diagnostics.cv_error2 = cv2.cv_error;
  return fit;
}

TwoStepFit bootstrap_iteration(const SarDataset& dataset, const EstimatorConfig& config,
                               std::uint64_t iteration_seed, const Fitter& fitter) {
  EstimatorConfig iteration_config = config;
  iteration_config.seed = iteration_seed;
  iteration_config.sample_with_replacement = true;
  return fitter ? fitter(dataset, iteration_config)
                : two_step_fit(dataset, iteration_config);
}

BootstrapResult summarize_bootstrap(std::vector<TwoStepFit> fits, int b_requested,
                                    int failures) {
  if (fits.empty()) throw NumericalError("every bootstrap iteration failed");
  const long m = fits[0].w_hat.size();
  const long k = fits[0].beta_hat.size();
  const long count = static_cast<long>(fits.size());

  BootstrapResult result;
  result.b_requested = b_requested;
  result.failures = failures;
  result.mean_w = Eigen::VectorXd::Zero(m);
  result.mean_beta = Eigen::VectorXd::Zero(k);
  for (const TwoStepFit& fit : fits) {
    if (fit.w_hat.size() != m || fit.beta_hat.size() != k) {
      throw std::invalid_argument("bootstrap iterations disagree on coefficient shapes");
    }
    result.mean_w += fit.w_hat;
    result.mean_beta += fit.beta_hat;
    result.mean_c += fit.c_hat;
  }
  result.mean_w /= count;
  result.mean_beta /= count;
  result.mean_c /= count;

  result.se_w = Eigen::VectorXd::Zero(m);
  result.se_beta = Eigen::VectorXd::Zero(k);
  if (count > 1) {
    double var_c = 0.0;
    for (const TwoStepFit& fit : fits) {
      result.se_w.array() += (fit.w_hat - result.mean_w).array().square();
      result.se_beta.array() += (fit.beta_hat - result.mean_beta).array().square();
      var_c += (fit.c_hat - result.mean_c) * (fit.c_hat - result.mean_c);
    }
    result.se_w = (result.se_w / (count - 1)).cwiseSqrt();
    result.se_beta = (result.se_beta / (count - 1)).cwiseSqrt();
    result.se_c = std::sqrt(var_c / (count - 1));
  }
  result.fits = std::move(fits);
  return result;
}

BootstrapResult bootstrap(const SarDataset& dataset, const EstimatorConfig& config, int b,
                          int jobs, const Fitter& fitter) {
  if (b < 2) throw std::invalid_argument("bootstrap needs at least two iterations");
  const Fitter fit_fn = fitter ? fitter : default_fitter();

  std::vector<std::optional<TwoStepFit>> slots(b);
  parallel_for(b, resolve_jobs(jobs), [&](long i) {
    try {
      slots[i] = bootstrap_iteration(dataset, config,
                                     mix_seed(config.seed, static_cast<std::uint64_t>(i)),
                                     fit_fn);
    } catch (const std::exception&) {
      // failed iterations are excluded and counted
    }
  });

  std::vector<TwoStepFit> fits;
  fits.reserve(b);
  int failures = 0;
  for (auto& slot : slots) {
    if (slot) {
      fits.push_back(std::move(*slot));
    } else {
      ++failures;
    }
  }
  return summarize_bootstrap(std::move(fits), b, failures);
}

SparseWeights reconstruct_weights(const TwoStepFit& fit, const Lattice& lattice,
                                  const NeighborhoodTemplate& tmpl) {
  if (fit.w_hat.size() != tmpl.m) {
    throw std::invalid_argument("estimated weight vector does not match the template");
  }
  return weights_from_vector(lattice, tmpl, fit.w_hat);
}

FittedValues fitted_values(const TwoStepFit& fit, const SarDataset& dataset,
                           const NeighborhoodTemplate& tmpl) {
  if (fit.beta_hat.size() != dataset.k()) {
    throw std::invalid_argument("beta length does not match the dataset");
  }
  if (fit.w_hat.size() != tmpl.m) {
    throw std::invalid_argument("estimated weight vector does not match the template");
  }

  const bool needs_predictions = (fit.w_hat.array() != 0.0).any();
  PredictedField predicted;
  if (needs_predictions) {
    predicted = predict_endogenous(fit.theta_hat, fit.theta_intercept, dataset, tmpl);
  }

  FittedValues out;
  out.y_hat.resize(dataset.n());
  out.spatial_complete.assign(dataset.n(), true);
  for (int site = 0; site < dataset.n(); ++site) {
    const double exog = fit.intercept + dataset.x.row(site).dot(fit.beta_hat);
    double spatial = 0.0;
    bool complete = true;
    if (needs_predictions) {
      const auto [row, col] = dataset.lattice.row_col(site);
      for (int j = 0; j < tmpl.m; ++j) {
        if (fit.w_hat[j] == 0.0) continue;
        const int r = row + tmpl.offsets[j].drow;
        const int c = col + tmpl.offsets[j].dcol;
        if (!dataset.lattice.contains(r, c) || !predicted.valid[dataset.lattice.site(r, c)]) {
          complete = false;
          break;
        }
        spatial += fit.w_hat[j] * predicted.value[dataset.lattice.site(r, c)];
      }
    }
    // incomplete windows fall back to the exogenous part only
    out.y_hat[site] = complete ? exog + spatial : exog;
    out.spatial_complete[site] = complete;
  }
  return out;
}

}  // namespace latsar
