#include "latsar/mlbench.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "latsar/errors.hpp"
#include "latsar/resample.hpp"

namespace latsar {

namespace {

constexpr double kTwoPi = 6.283185307186547462;

/// Brent's minimizer (parabolic interpolation + golden section) on [a, b].
double brent_min(double a, double b, double tol_abs,
                 const std::function<double(double)>& f, double* f_min) {
  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  double x = a + golden * (b - a);
  double w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (a + b);
    const double tol = 1e-12 * std::abs(x) + tol_abs;
    if (std::abs(x - mid) <= 2.0 * tol - 0.5 * (b - a)) break;
    double p = 0.0, q = 0.0, r = 0.0;
    if (std::abs(e) > tol) {
      r = (x - w) * (fx - fv);
      q = (x - v) * (fx - fw);
      p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) {
        p = -p;
      } else {
        q = -q;
      }
      r = e;
      e = d;
    }
    if (std::abs(p) < std::abs(0.5 * q * r) && p > q * (a - x) && p < q * (b - x)) {
      d = p / q;  // parabolic step
      const double u = x + d;
      if (u - a < 2.0 * tol || b - u < 2.0 * tol) d = x < mid ? tol : -tol;
    } else {
      e = (x < mid ? b : a) - x;
      d = golden * e;
    }
    const double u = std::abs(d) >= tol ? x + d : x + (d > 0.0 ? tol : -tol);
    const double fu = f(u);
    if (fu <= fx) {
      if (u < x) {
        b = x;
      } else {
        a = x;
      }
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x) {
        a = u;
      } else {
        b = u;
      }
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  if (f_min) *f_min = fx;
  return x;
}

double log_det(const MlContext& ctx, double c) {
  double sum = 0.0;
  for (long i = 0; i < ctx.eig_real.size(); ++i) {
    const double re = 1.0 - c * ctx.eig_real[i];
    const double im = -c * ctx.eig_imag[i];
    const double mod2 = re * re + im * im;
    if (!(mod2 > 0.0)) return -std::numeric_limits<double>::infinity();
    sum += 0.5 * std::log(mod2);
  }
  return sum;
}

struct ProfileData {
  double s00 = 0.0;  // e0'e0
  double s0l = 0.0;  // e0'eL
  double sll = 0.0;  // eL'eL
  long n = 0;
};

double profile_value(const ProfileData& pd, const MlContext& ctx, double c) {
  const double rss = pd.s00 - 2.0 * c * pd.s0l + c * c * pd.sll;
  if (!(rss > 0.0)) return -std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(pd.n);
  return -0.5 * n * (std::log(kTwoPi * rss / n) + 1.0) + log_det(ctx, c);
}

struct FitWork {
  Eigen::MatrixXd x_aug;  // [1 X]
  Eigen::VectorXd y;
  Eigen::VectorXd wy;
  ProfileData pd;
};

FitWork prepare_fit(const SarDataset& dataset, const MlContext& ctx) {
  if (dataset.n() != ctx.base.n) {
    throw std::invalid_argument("dataset size does not match the base matrix");
  }
  if (dataset.y.size() != dataset.n() || dataset.x.rows() != dataset.n()) {
    throw std::invalid_argument("dataset rows do not match its lattice");
  }
  FitWork work;
  const long n = dataset.n();
  work.y = dataset.y;
  work.wy = ctx.base.matrix * dataset.y;
  work.x_aug.resize(n, dataset.k() + 1);
  work.x_aug.col(0).setOnes();
  work.x_aug.rightCols(dataset.k()) = dataset.x;

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(work.x_aug);
  const Eigen::VectorXd e0 = work.y - work.x_aug * qr.solve(work.y);
  const Eigen::VectorXd el = work.wy - work.x_aug * qr.solve(work.wy);
  work.pd = ProfileData{e0.squaredNorm(), e0.dot(el), el.squaredNorm(), n};
  return work;
}

double full_loglik(const FitWork& work, const MlContext& ctx, double c,
                   const Eigen::VectorXd& b_aug, double sigma2) {
  if (!(sigma2 > 0.0)) return -std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(work.pd.n);
  const double rss = (work.y - c * work.wy - work.x_aug * b_aug).squaredNorm();
  return -0.5 * n * std::log(kTwoPi * sigma2) + log_det(ctx, c) - rss / (2.0 * sigma2);
}

}  // namespace

MlContext MlContext::prepare(const SparseWeights& base, int dense_limit) {
  if (base.n > dense_limit) {
    throw CapabilityError("base matrix size " + std::to_string(base.n) +
                          " exceeds the dense eigen limit of " + std::to_string(dense_limit) +
                          "; use the two-step estimator for larger lattices");
  }
  MlContext ctx;
  ctx.base = base;

  const Eigen::VectorXd sums = row_sums(base);
  for (int i = 0; i < base.n; ++i) {
    if (std::abs(sums[i]) > 1e-8 && std::abs(sums[i] - 1.0) > 1e-8) {
      throw std::invalid_argument("base matrix must be row-standardized to unit row sums");
    }
  }

  const Eigen::MatrixXd dense(base.matrix);
  // Row-normalized contiguity matrices are similar to a symmetric matrix via
  // the degree scaling; detect that and use the cheaper symmetric solver.
  Eigen::VectorXd degree(base.n);
  for (int i = 0; i < base.n; ++i) {
    degree[i] = static_cast<double>(base.matrix.outerIndexPtr()[i + 1] -
                                    base.matrix.outerIndexPtr()[i]);
  }
  bool symmetric_similar = true;
  Eigen::MatrixXd similar(base.n, base.n);
  for (int i = 0; i < base.n && symmetric_similar; ++i) {
    for (int j = 0; j < base.n; ++j) {
      similar(i, j) = degree[j] > 0.0 ? dense(i, j) * std::sqrt(degree[i] / degree[j])
                                      : dense(i, j);
    }
  }
  if ((similar - similar.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    symmetric_similar = false;
  }

  if (symmetric_similar) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(similar,
                                                          Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("symmetric eigen decomposition of the base matrix failed");
    }
    ctx.eig_real = solver.eigenvalues();
    ctx.eig_imag = Eigen::VectorXd::Zero(base.n);
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(dense, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("eigen decomposition of the base matrix failed");
    }
    ctx.eig_real = solver.eigenvalues().real();
    ctx.eig_imag = solver.eigenvalues().imag();
  }

  // feasible interval from the real eigenvalues: 1 - c*lambda must stay positive
  double max_pos = 0.0, min_neg = 0.0;
  for (int i = 0; i < base.n; ++i) {
    if (std::abs(ctx.eig_imag[i]) > 1e-9 * std::max(1.0, std::abs(ctx.eig_real[i]))) continue;
    max_pos = std::max(max_pos, ctx.eig_real[i]);
    min_neg = std::min(min_neg, ctx.eig_real[i]);
  }
  ctx.c_hi = max_pos > 1e-12 ? 1.0 / max_pos : 1e3;
  ctx.c_lo = min_neg < -1e-12 ? 1.0 / min_neg : -1e3;
  return ctx;
}

double sar_loglik(const SarDataset& dataset, const MlContext& context, double c,
                  const Eigen::VectorXd& beta, double intercept, double sigma2) {
  if (beta.size() != dataset.k()) {
    throw std::invalid_argument("beta length does not match the dataset");
  }
  const FitWork work = prepare_fit(dataset, context);
  Eigen::VectorXd b_aug(dataset.k() + 1);
  b_aug[0] = intercept;
  b_aug.tail(dataset.k()) = beta;
  return full_loglik(work, context, c, b_aug, sigma2);
}

double sar_profile_loglik(const SarDataset& dataset, const MlContext& context, double c) {
  const FitWork work = prepare_fit(dataset, context);
  return profile_value(work.pd, context, c);
}

MlFit ml_fit(const SarDataset& dataset, const MlContext& context) {
  const FitWork work = prepare_fit(dataset, context);
  const long n = work.pd.n;
  const int k = dataset.k();

  MlFit fit;
  if (work.pd.sll <= 1e-24 * std::max(1.0, work.pd.s00)) {
    fit.c_hat = 0.0;  // the spatial lag carries no signal
  } else {
    const double span = context.c_hi - context.c_lo;
    const double margin = 1e-8 * span;
    fit.c_hat = brent_min(
        context.c_lo + margin, context.c_hi - margin, 1e-9,
        [&](double c) { return -profile_value(work.pd, context, c); }, nullptr);
  }

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(work.x_aug);
  const Eigen::VectorXd b_aug = qr.solve(work.y - fit.c_hat * work.wy);
  fit.intercept = b_aug[0];
  fit.beta_hat = b_aug.tail(k);
  const double rss =
      (work.y - fit.c_hat * work.wy - work.x_aug * b_aug).squaredNorm();
  fit.sigma2_hat = rss / static_cast<double>(n);
  fit.loglik = full_loglik(work, context, fit.c_hat, b_aug, fit.sigma2_hat);

  // observed-information standard errors from a numerical Hessian over
  // theta = (c, b0, beta, sigma2)
  const int dim = k + 3;
  Eigen::VectorXd theta(dim);
  theta[0] = fit.c_hat;
  theta.segment(1, k + 1) = b_aug;
  theta[dim - 1] = fit.sigma2_hat;
  const auto eval = [&](const Eigen::VectorXd& t) {
    return full_loglik(work, context, t[0], t.segment(1, k + 1), t[dim - 1]);
  };
  Eigen::VectorXd step(dim);
  for (int i = 0; i < dim; ++i) step[i] = 1e-4 * std::max(std::abs(theta[i]), 1e-3);
  Eigen::MatrixXd hessian(dim, dim);
  const double f0 = eval(theta);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      Eigen::VectorXd t = theta;
      double value;
      if (i == j) {
        t[i] = theta[i] + step[i];
        const double fp = eval(t);
        t[i] = theta[i] - step[i];
        const double fm = eval(t);
        value = (fp - 2.0 * f0 + fm) / (step[i] * step[i]);
      } else {
        t[i] = theta[i] + step[i];
        t[j] = theta[j] + step[j];
        const double fpp = eval(t);
        t[j] = theta[j] - step[j];
        const double fpm = eval(t);
        t[i] = theta[i] - step[i];
        const double fmm = eval(t);
        t[j] = theta[j] + step[j];
        const double fmp = eval(t);
        value = (fpp - fpm - fmp + fmm) / (4.0 * step[i] * step[j]);
      }
      hessian(i, j) = value;
      hessian(j, i) = value;
    }
  }
  const Eigen::MatrixXd info = -hessian;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
  fit.beta_se = Eigen::VectorXd::Constant(k, std::numeric_limits<double>::quiet_NaN());
  fit.c_se = std::numeric_limits<double>::quiet_NaN();
  fit.intercept_se = std::numeric_limits<double>::quiet_NaN();
  fit.sigma2_se = std::numeric_limits<double>::quiet_NaN();
  if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
    const Eigen::MatrixXd cov = ldlt.solve(Eigen::MatrixXd::Identity(dim, dim));
    if ((cov.diagonal().array() >= 0.0).all()) {
      fit.c_se = std::sqrt(cov(0, 0));
      fit.intercept_se = std::sqrt(cov(1, 1));
      for (int i = 0; i < k; ++i) fit.beta_se[i] = std::sqrt(cov(i + 2, i + 2));
      fit.sigma2_se = std::sqrt(cov(dim - 1, dim - 1));
    }
  }
  return fit;
}

MlFit ml_fit(const SarDataset& dataset, const SparseWeights& base, int dense_limit) {
  return ml_fit(dataset, MlContext::prepare(base, dense_limit));
}

std::vector<TimingRow> timing_comparison(const std::vector<int>& n_list,
                                         const TimingConfig& config) {
  if (config.reps < 1) throw std::invalid_argument("timing needs at least one repetition");
  using clock = std::chrono::steady_clock;
  const auto summarize = [](const std::vector<double>& seconds) {
    double mean = 0.0;
    for (double s : seconds) mean += s;
    mean /= static_cast<double>(seconds.size());
    double var = 0.0;
    for (double s : seconds) var += (s - mean) * (s - mean);
    const double sd = seconds.size() > 1 ? std::sqrt(var / (seconds.size() - 1)) : 0.0;
    return std::pair<double, double>(mean, sd);
  };

  std::vector<TimingRow> rows;
  for (const int n : n_list) {
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (side * side != n) {
      throw std::invalid_argument("timing grid sizes must be perfect squares, got " +
                                  std::to_string(n));
    }
    const Lattice lattice = Lattice::create(side, side);
    Rng data_rng = make_rng(config.seed, static_cast<std::uint64_t>(n));
    SimulationSettings settings;
    settings.scheme = WeightScheme::queen(config.c);
    const SarDataset dataset = simulate_dataset(lattice, settings, data_rng);

    for (const int m : config.m_list) {
      const ReplicationCounts counts = replication_counts(n, m);
      std::vector<double> seconds;
      seconds.reserve(config.reps);
      for (int rep = 0; rep < config.reps; ++rep) {
        EstimatorConfig est;
        est.m = m;
        est.r1 = counts.r_max;
        est.folds = config.folds;
        est.seed = mix_seed(config.seed, static_cast<std::uint64_t>(rep) * 1000 + m);
        const auto start = clock::now();
        two_step_fit(dataset, est);
        seconds.push_back(std::chrono::duration<double>(clock::now() - start).count());
      }
      const auto [mean, sd] = summarize(seconds);
      rows.push_back(TimingRow{n, "twostep", m, mean, sd});
    }

    {
      const SparseWeights base =
          unit_row_normalized(build_weights(lattice, WeightScheme::queen(config.c)));
      std::vector<double> seconds;
      seconds.reserve(config.reps);
      for (int rep = 0; rep < config.reps; ++rep) {
        const auto start = clock::now();
        // the eigen decomposition is part of the method cost, so time it too
        const MlContext ctx = MlContext::prepare(base, config.dense_limit);
        ml_fit(dataset, ctx);
        seconds.push_back(std::chrono::duration<double>(clock::now() - start).count());
      }
      const auto [mean, sd] = summarize(seconds);
      rows.push_back(TimingRow{n, "ml", 0, mean, sd});
    }
  }
  return rows;
}

}  // namespace latsar
