#include "latsar/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "latsar/errors.hpp"

namespace latsar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPriorFloor = 1e-8;
constexpr double kRidgeDelta = 1e-3;
constexpr double kBallBoundaryTol = 1e-10;

/// The problem after preconditioning: columns centered (with intercept) and
/// scaled to squared norm = rows, the response centered, penalties and the
/// ball transferred to the scaled coefficients. Solving the scaled problem
/// minimizes the original objective exactly.
struct Problem {
  Eigen::MatrixXd a;
  Eigen::VectorXd y;
  Eigen::VectorXd scale;     // s_j; 0 marks a frozen column
  Eigen::VectorXd col_mean;
  double y_mean = 0.0;
  double yy = 0.0;
  Eigen::VectorXd psi_std;   // psi_j / s_j, +inf freezes
  Eigen::VectorXd ball_u;    // 1/s_j over the ball mask, else 0
  std::vector<char> frozen;
  std::vector<char> nonneg;
  bool has_ball = false;
  double ball_bound = 0.0;
  Eigen::MatrixXd gram;      // a' a
  Eigen::VectorXd cvec;      // a' y
  int rows = 0;
  int p = 0;
  bool intercept = false;
};

struct CdState {
  Eigen::VectorXd beta;  // scaled coefficients
  Eigen::VectorXd q;     // gram * beta, maintained incrementally
};

void validate_inputs(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                     const PenaltySpec& penalty, const ConstraintSpec& constraints) {
  if (design.rows() < 1 || design.cols() < 1) {
    throw std::invalid_argument("design must have at least one row and one column");
  }
  if (response.size() != design.rows()) {
    throw std::invalid_argument("response length does not match design rows");
  }
  if (!design.allFinite() || !response.allFinite()) {
    throw std::invalid_argument("design and response must be finite");
  }
  const int p = static_cast<int>(design.cols());
  if (penalty.psi.size() != p) {
    throw std::invalid_argument("penalty weight length does not match design columns");
  }
  for (int j = 0; j < p; ++j) {
    const double v = penalty.psi[j];
    if (std::isnan(v) || v < 0.0) {
      throw std::invalid_argument("penalty weights must be nonnegative (or +inf)");
    }
  }
  if (!constraints.nonneg_mask.empty() &&
      static_cast<int>(constraints.nonneg_mask.size()) != p) {
    throw std::invalid_argument("nonneg mask length does not match design columns");
  }
  if (constraints.l1_ball) {
    if (static_cast<int>(constraints.l1_ball->mask.size()) != p) {
      throw std::invalid_argument("l1 ball mask length does not match design columns");
    }
    if (!(constraints.l1_ball->bound > 0.0)) {
      throw std::invalid_argument("l1 ball bound must be positive");
    }
  }
}

Problem standardize(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                    const PenaltySpec& penalty, const ConstraintSpec& constraints,
                    bool intercept) {
  Problem pb;
  pb.rows = static_cast<int>(design.rows());
  pb.p = static_cast<int>(design.cols());
  pb.intercept = intercept;
  pb.a = design;
  pb.y = response;
  pb.col_mean = Eigen::VectorXd::Zero(pb.p);
  if (intercept) {
    pb.y_mean = pb.y.mean();
    pb.y.array() -= pb.y_mean;
    pb.col_mean = pb.a.colwise().mean();
    pb.a.rowwise() -= pb.col_mean.transpose();
  }
  pb.yy = pb.y.squaredNorm();

  pb.scale.resize(pb.p);
  pb.psi_std.resize(pb.p);
  pb.ball_u = Eigen::VectorXd::Zero(pb.p);
  pb.frozen.assign(pb.p, 0);
  pb.nonneg.assign(pb.p, 0);
  if (!constraints.nonneg_mask.empty()) {
    for (int j = 0; j < pb.p; ++j) pb.nonneg[j] = constraints.nonneg_mask[j] ? 1 : 0;
  }
  if (constraints.l1_ball) {
    pb.has_ball = true;
    pb.ball_bound = constraints.l1_ball->bound;
  }

  for (int j = 0; j < pb.p; ++j) {
    const double s = std::sqrt(pb.a.col(j).squaredNorm() / pb.rows);
    const double floor = 1e-12 * std::max(1.0, std::abs(pb.col_mean[j]));
    if (!(s > floor) || penalty.psi[j] == kInf) {
      // constant/empty column or explicitly frozen coefficient
      pb.frozen[j] = 1;
      pb.scale[j] = 0.0;
      pb.psi_std[j] = kInf;
      pb.a.col(j).setZero();
      continue;
    }
    pb.scale[j] = s;
    pb.a.col(j) /= s;
    pb.psi_std[j] = penalty.psi[j] / s;
    if (pb.has_ball && constraints.l1_ball->mask[j]) pb.ball_u[j] = 1.0 / s;
  }

  pb.gram = pb.a.transpose() * pb.a;
  pb.cvec = pb.a.transpose() * pb.y;
  return pb;
}

double ball_norm(const Problem& pb, const CdState& st) {
  double h = 0.0;
  for (int j = 0; j < pb.p; ++j) {
    if (pb.ball_u[j] > 0.0) h += pb.ball_u[j] * std::abs(st.beta[j]);
  }
  return h;
}

double update_coord(const Problem& pb, CdState& st, int j, double lambda, double mu) {
  const double denom = pb.gram(j, j);
  if (!(denom > 0.0)) return 0.0;
  const double z = pb.cvec[j] - st.q[j] + denom * st.beta[j];
  const double thr = 0.5 * (lambda * pb.psi_std[j] + mu * pb.ball_u[j]);
  double t;
  if (pb.nonneg[j]) {
    t = z > thr ? (z - thr) / denom : 0.0;
  } else if (z > thr) {
    t = (z - thr) / denom;
  } else if (z < -thr) {
    t = (z + thr) / denom;
  } else {
    t = 0.0;
  }
  const double delta = t - st.beta[j];
  if (delta != 0.0) {
    st.q.noalias() += pb.gram.col(j) * delta;
    st.beta[j] = t;
  }
  return std::abs(delta);
}

double kkt_violation(const Problem& pb, const CdState& st, double lambda, double mu) {
  double worst = 0.0;
  for (int j = 0; j < pb.p; ++j) {
    if (pb.frozen[j]) continue;
    const double grad = pb.cvec[j] - st.q[j];  // a_j' (y - a beta)
    const double pen = lambda * pb.psi_std[j] + mu * pb.ball_u[j];
    double v;
    if (st.beta[j] == 0.0) {
      v = pb.nonneg[j] ? 2.0 * grad - pen : std::abs(2.0 * grad) - pen;
      v = std::max(0.0, v);
    } else if (st.beta[j] > 0.0) {
      v = std::abs(2.0 * grad - pen);
    } else {
      v = std::abs(2.0 * grad + pen);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

double lagrangian(const Problem& pb, const CdState& st, double lambda, double mu) {
  const double rss = pb.yy - 2.0 * pb.cvec.dot(st.beta) + st.beta.dot(st.q);
  double pen = 0.0;
  for (int j = 0; j < pb.p; ++j) {
    if (!pb.frozen[j] && st.beta[j] != 0.0) pen += pb.psi_std[j] * std::abs(st.beta[j]);
  }
  return rss + lambda * pen + mu * ball_norm(pb, st);
}

std::vector<double> original_scale(const Problem& pb, const CdState& st) {
  std::vector<double> coef(pb.p, 0.0);
  for (int j = 0; j < pb.p; ++j) {
    if (!pb.frozen[j]) coef[j] = st.beta[j] / pb.scale[j];
  }
  return coef;
}

struct RunStats {
  int sweeps = 0;
  double kkt = 0.0;
};

/// Newton step over the current signed support: one linear solve replaces the
/// geometric tail coordinate descent suffers on ill-conditioned active sets.
/// The step is truncated where the first coordinate would cross zero (that
/// coordinate lands exactly on zero and leaves the support), so the l1
/// geometry is respected, and it is applied only when the objective does not
/// increase; otherwise the iterate is left for coordinate descent. Returns
/// the largest coordinate change applied (0 when the step was rejected),
/// which doubles as a convergence certificate: a converged iterate is a
/// fixed point of this step.
double subspace_step(const Problem& pb, CdState& st, double lambda, double mu) {
  std::vector<int> active;
  for (int j = 0; j < pb.p; ++j) {
    if (!pb.frozen[j] && st.beta[j] != 0.0) active.push_back(j);
  }
  if (active.empty()) return 0.0;
  const int a = static_cast<int>(active.size());

  Eigen::MatrixXd g(a, a);
  Eigen::VectorXd rhs(a);
  for (int i = 0; i < a; ++i) {
    const int j = active[i];
    const double sign = st.beta[j] > 0.0 ? 1.0 : -1.0;
    rhs[i] = pb.cvec[j] - 0.5 * (lambda * pb.psi_std[j] + mu * pb.ball_u[j]) * sign;
    for (int t = 0; t < a; ++t) g(i, t) = pb.gram(j, active[t]);
  }
  // Tiny ridge keeps the solve well posed when the support is wider than the
  // row space; the direction stays a descent direction and the objective
  // check below decides acceptance either way.
  const double ridge = 1e-10 * std::max(1.0, g.trace() / a);
  g.diagonal().array() += ridge;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
  if (ldlt.info() != Eigen::Success) return 0.0;
  const Eigen::VectorXd x = ldlt.solve(rhs);
  if (!x.allFinite()) return 0.0;

  // Longest step toward x that keeps every active sign; the blocking
  // coordinate is zeroed exactly.
  double step = 1.0;
  for (int i = 0; i < a; ++i) {
    const double b = st.beta[active[i]];
    if (x[i] * (b > 0.0 ? 1.0 : -1.0) <= 0.0) {
      step = std::min(step, b / (b - x[i]));
    }
  }
  if (!(step > 0.0)) return 0.0;

  st.q.noalias() = pb.gram * st.beta;
  const double before = lagrangian(pb, st, lambda, mu);
  CdState trial = st;
  double moved_max = 0.0;
  for (int i = 0; i < a; ++i) {
    const double b = st.beta[active[i]];
    const double moved = b + step * (x[i] - b);
    trial.beta[active[i]] = moved * b > 0.0 ? moved : 0.0;
    moved_max = std::max(moved_max, std::abs(trial.beta[active[i]] - b));
  }
  trial.q.noalias() = pb.gram * trial.beta;
  if (lagrangian(pb, trial, lambda, mu) > before) return 0.0;
  st = std::move(trial);
  return moved_max;
}

/// Cyclic coordinate descent at fixed (lambda, mu): full sweeps interleaved
/// with active-set sweeps until the largest coordinate change of a full sweep
/// falls below tol, with at most max_sweeps sweeps for this one run. When
/// `polish` is set, extra sweeps are spent pushing the stationarity residual
/// toward kkt_tol for as long as that keeps improving; the achieved residual
/// is reported either way.
RunStats run_cd(const Problem& pb, CdState& st, double lambda, double mu,
                const SolverControl& control, bool polish) {
  RunStats stats;
  int sweep_budget = control.max_sweeps;
  auto account = [&] {
    ++stats.sweeps;
    if (--sweep_budget < 0) {
      st.q.noalias() = pb.gram * st.beta;
      throw ConvergenceError("coordinate descent did not converge within " +
                                 std::to_string(control.max_sweeps) + " sweeps",
                             original_scale(pb, st), kkt_violation(pb, st, lambda, mu));
    }
    if (control.sweep_observer) {
      control.sweep_observer(lambda, mu, stats.sweeps, lagrangian(pb, st, lambda, mu));
    }
  };
  auto sweep = [&](bool active_only) {
    double worst = 0.0;
    for (int j = 0; j < pb.p; ++j) {
      if (pb.frozen[j]) continue;
      if (active_only && st.beta[j] == 0.0) continue;
      worst = std::max(worst, update_coord(pb, st, j, lambda, mu));
    }
    account();
    return worst;
  };

  int next_subspace = 50;
  for (;;) {
    const double delta = sweep(false);
    if (delta < control.tol) {
      // Per-sweep changes can stall below tol while the objective still
      // crawls along an ill-conditioned active set. Accept convergence only
      // when the exact Newton step on the signed support agrees; when it
      // moves a coordinate materially, resume sweeping from the better point.
      if (subspace_step(pb, st, lambda, mu) < control.tol) break;
      continue;
    }
    while (sweep(true) >= control.tol && stats.sweeps < next_subspace) {
    }
    if (stats.sweeps >= next_subspace) {
      subspace_step(pb, st, lambda, mu);
      next_subspace = stats.sweeps + 50;
    }
  }
  st.q.noalias() = pb.gram * st.beta;  // clear incremental drift
  stats.kkt = kkt_violation(pb, st, lambda, mu);

  if (polish) {
    const double kkt_floor = std::max(control.kkt_tol, 1e-12 * (1.0 + pb.yy));
    while (stats.kkt > kkt_floor && sweep_budget > 0) {
      sweep(false);
      st.q.noalias() = pb.gram * st.beta;
      const double fresh = kkt_violation(pb, st, lambda, mu);
      if (fresh >= 0.9 * stats.kkt) {
        // residual no longer shrinking (ill-conditioned design); keep the
        // iterate and report what was achieved
        stats.kkt = std::min(stats.kkt, fresh);
        break;
      }
      stats.kkt = fresh;
    }
  }
  return stats;
}

struct LambdaSolution {
  double mu = 0.0;
  RunStats stats;
};

/// Solve one path point. When the l1 ball binds, the exact multiplier is
/// located by bisection on mu (the masked norm is non-increasing in mu); the
/// returned state is always on the feasible side of the boundary.
LambdaSolution solve_lambda(const Problem& pb, CdState& st, double lambda,
                            const SolverControl& control) {
  LambdaSolution sol;
  sol.stats = run_cd(pb, st, lambda, 0.0, control, /*polish=*/false);
  if (!pb.has_ball || ball_norm(pb, st) <= pb.ball_bound) {
    const RunStats polished = run_cd(pb, st, lambda, 0.0, control, true);
    sol.stats.sweeps += polished.sweeps;
    sol.stats.kkt = polished.kkt;
    return sol;
  }

  double lo = 0.0;
  double hi = 1.0;
  CdState feasible;
  RunStats feasible_stats;
  for (;;) {
    const RunStats stats = run_cd(pb, st, lambda, hi, control, false);
    sol.stats.sweeps += stats.sweeps;
    if (ball_norm(pb, st) <= pb.ball_bound) {
      feasible = st;
      feasible_stats = stats;
      break;
    }
    lo = hi;
    hi *= 2.0;
    if (hi > 1e18) {
      throw NumericalError("l1 ball multiplier search diverged");
    }
  }
  for (int it = 0; it < 200; ++it) {
    if (pb.ball_bound - ball_norm(pb, feasible) <= kBallBoundaryTol) break;
    if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
    const double mid = 0.5 * (lo + hi);
    const RunStats stats = run_cd(pb, st, lambda, mid, control, false);
    sol.stats.sweeps += stats.sweeps;
    if (ball_norm(pb, st) > pb.ball_bound) {
      lo = mid;
    } else {
      hi = mid;
      feasible = st;
      feasible_stats = stats;
    }
  }
  st = feasible;
  sol.mu = hi;
  sol.stats.kkt = feasible_stats.kkt;
  return sol;
}

LassoFit finish_fit(const Problem& pb, const CdState& st, double lambda,
                    const LambdaSolution& sol, int sweeps_used) {
  LassoFit fit;
  fit.lambda = lambda;
  fit.coef.resize(pb.p);
  double pen = 0.0;
  for (int j = 0; j < pb.p; ++j) {
    fit.coef[j] = pb.frozen[j] ? 0.0 : st.beta[j] / pb.scale[j];
    if (!pb.frozen[j] && st.beta[j] != 0.0) pen += pb.psi_std[j] * std::abs(st.beta[j]);
  }
  fit.intercept = pb.intercept ? pb.y_mean - pb.col_mean.dot(fit.coef) : 0.0;
  fit.objective = (pb.y - pb.a * st.beta).squaredNorm() + lambda * pen;
  fit.kkt_violation = sol.stats.kkt;
  fit.n_iter = sweeps_used;
  fit.ball_multiplier = sol.mu;
  return fit;
}

double lambda_max_std(const Problem& pb) {
  double lmax = 0.0;
  for (int j = 0; j < pb.p; ++j) {
    if (pb.frozen[j] || pb.psi_std[j] == kInf || pb.psi_std[j] <= 0.0) continue;
    const double grad = pb.cvec[j];
    const double cand =
        pb.nonneg[j] ? 2.0 * std::max(0.0, grad) / pb.psi_std[j]
                     : 2.0 * std::abs(grad) / pb.psi_std[j];
    lmax = std::max(lmax, cand);
  }
  return lmax > 0.0 ? lmax : 1.0;
}

std::vector<double> resolve_grid(const Problem& pb, const PenaltySpec& penalty) {
  if (penalty.lambda_grid.empty()) return make_lambda_grid(lambda_max_std(pb));
  const auto& grid = penalty.lambda_grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
      throw std::invalid_argument("lambda grid entries must be positive and finite");
    }
    if (i > 0 && !(grid[i] < grid[i - 1])) {
      throw std::invalid_argument("lambda grid must be strictly descending");
    }
  }
  return grid;
}

std::vector<LassoFit> solve_path_impl(const Problem& pb, const PenaltySpec& penalty,
                                      const SolverControl& control) {
  const std::vector<double> grid = resolve_grid(pb, penalty);
  CdState st;
  st.beta = Eigen::VectorXd::Zero(pb.p);
  st.q = Eigen::VectorXd::Zero(pb.p);

  std::vector<LassoFit> fits;
  fits.reserve(grid.size());
  for (const double lambda : grid) {
    const LambdaSolution sol = solve_lambda(pb, st, lambda, control);
    fits.push_back(finish_fit(pb, st, lambda, sol, sol.stats.sweeps));
  }
  return fits;
}

}  // namespace

double soft_threshold(double z, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("threshold must be nonnegative");
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

Eigen::VectorXd adaptive_weights(const Eigen::VectorXd& prior, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  Eigen::VectorXd psi(prior.size());
  for (long j = 0; j < prior.size(); ++j) {
    const double mag = std::abs(prior[j]);
    psi[j] = mag < kPriorFloor ? kInf : std::pow(mag, -gamma);
  }
  return psi;
}

Eigen::VectorXd prior_estimate(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                               bool intercept) {
  const long rows = design.rows();
  const long p = design.cols();
  if (rows < 2) throw std::invalid_argument("prior estimation needs at least two rows");
  if (response.size() != rows) {
    throw std::invalid_argument("response length does not match design rows");
  }

  Eigen::MatrixXd a = design;
  Eigen::VectorXd y = response;
  if (intercept) {
    a.rowwise() -= design.colwise().mean();
    y.array() -= response.mean();
  }

  const Eigen::MatrixXd normal = a.transpose() * a;
  const Eigen::VectorXd aty = a.transpose() * y;
  const double mean_diag = normal.trace() / static_cast<double>(p);
  if (!(mean_diag > 0.0)) {
    throw std::invalid_argument("design is degenerate: all columns are zero");
  }

  if (p < rows) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
    // Condition estimate from the pivot spread; LDLT::rcond() is blind to
    // exact singularity because its solve path zeroes tiny pivots.
    const double d_min = ldlt.vectorD().minCoeff();
    const double d_max = ldlt.vectorD().maxCoeff();
    if (ldlt.info() == Eigen::Success && ldlt.isPositive() && d_min > d_max * 1e-8) {
      return ldlt.solve(aty);
    }
  }
  // ridge fallback: columns outnumber rows or the normal matrix is near-singular
  Eigen::MatrixXd ridged = normal;
  ridged.diagonal().array() += kRidgeDelta * mean_diag;
  return Eigen::LDLT<Eigen::MatrixXd>(ridged).solve(aty);
}

std::vector<double> make_lambda_grid(double lambda_max, int count, double ratio) {
  if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) {
    throw std::invalid_argument("lambda_max must be positive and finite");
  }
  if (count < 1) throw std::invalid_argument("grid needs at least one point");
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("ratio must be in (0, 1)");
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = lambda_max;
    return grid;
  }
  const double step = std::log(ratio) / static_cast<double>(count - 1);
  for (int i = 0; i < count; ++i) grid[i] = lambda_max * std::exp(step * i);
  return grid;
}

double lambda_max(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                  const PenaltySpec& penalty, const ConstraintSpec& constraints,
                  bool intercept) {
  validate_inputs(design, response, penalty, constraints);
  return lambda_max_std(standardize(design, response, penalty, constraints, intercept));
}

std::vector<LassoFit> solve_path(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                                 const PenaltySpec& penalty, const ConstraintSpec& constraints,
                                 const SolverControl& control) {
  validate_inputs(design, response, penalty, constraints);
  const Problem pb = standardize(design, response, penalty, constraints, control.intercept);
  return solve_path_impl(pb, penalty, control);
}

std::vector<int> fold_assignment(int rows, int folds, Rng& rng) {
  if (folds < 2) throw std::invalid_argument("cross-validation needs at least two folds");
  if (rows < folds) {
    throw std::invalid_argument("not enough rows (" + std::to_string(rows) + ") for " +
                                std::to_string(folds) + " folds");
  }
  std::vector<int> labels(rows);
  for (int i = 0; i < rows; ++i) labels[i] = i % folds;
  std::shuffle(labels.begin(), labels.end(), rng);
  return labels;
}

CvResult cross_validate(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                        const PenaltySpec& penalty, const ConstraintSpec& constraints,
                        int folds, Rng& rng, const SolverControl& control) {
  validate_inputs(design, response, penalty, constraints);
  const int rows = static_cast<int>(design.rows());
  const std::vector<int> labels = fold_assignment(rows, folds, rng);

  const Problem full = standardize(design, response, penalty, constraints, control.intercept);
  PenaltySpec shared = penalty;
  shared.lambda_grid = resolve_grid(full, penalty);
  const int grid_size = static_cast<int>(shared.lambda_grid.size());

  std::vector<double> total_sq_error(grid_size, 0.0);
  for (int fold = 0; fold < folds; ++fold) {
    int test_rows = 0;
    for (int i = 0; i < rows; ++i) test_rows += labels[i] == fold;
    const int train_rows = rows - test_rows;
    Eigen::MatrixXd a_train(train_rows, design.cols());
    Eigen::VectorXd y_train(train_rows);
    Eigen::MatrixXd a_test(test_rows, design.cols());
    Eigen::VectorXd y_test(test_rows);
    for (int i = 0, tr = 0, te = 0; i < rows; ++i) {
      if (labels[i] == fold) {
        a_test.row(te) = design.row(i);
        y_test[te++] = response[i];
      } else {
        a_train.row(tr) = design.row(i);
        y_train[tr++] = response[i];
      }
    }

    const std::vector<LassoFit> path = solve_path(a_train, y_train, shared, constraints,
                                                  control);
    for (int g = 0; g < grid_size; ++g) {
      const Eigen::VectorXd pred =
          (a_test * path[g].coef).array() + path[g].intercept;
      total_sq_error[g] += (y_test - pred).squaredNorm();
    }
  }

  CvResult result;
  result.lambda_grid = shared.lambda_grid;
  result.cv_error.resize(grid_size);
  int best = 0;
  for (int g = 0; g < grid_size; ++g) {
    result.cv_error[g] = total_sq_error[g] / rows;
    if (result.cv_error[g] < result.cv_error[best]) best = g;  // ties keep the larger lambda
  }
  result.best_lambda = shared.lambda_grid[best];

  const std::vector<LassoFit> final_path = solve_path_impl(full, shared, control);
  result.fit = final_path[best];
  return result;
}

}  // namespace latsar
