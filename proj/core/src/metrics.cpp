#include "latsar/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace latsar {

double mae(const Eigen::VectorXd& w_hat, const Eigen::VectorXd& w_true) {
  if (w_hat.size() != w_true.size() || w_hat.size() == 0) {
    throw std::invalid_argument("weight vectors must have equal positive length");
  }
  return (w_hat - w_true).lpNorm<1>() / static_cast<double>(w_hat.size());
}

WeightEval support_stats(const Eigen::VectorXd& w_hat, const Eigen::VectorXd& w_true,
                         double zero_tol) {
  if (w_hat.size() != w_true.size() || w_hat.size() == 0) {
    throw std::invalid_argument("weight vectors must have equal positive length");
  }
  if (zero_tol < 0.0) throw std::invalid_argument("zero tolerance must be nonnegative");

  WeightEval eval;
  eval.mae = mae(w_hat, w_true);
  const long m = w_hat.size();
  eval.support_hat.resize(m);
  eval.support_true.resize(m);
  int tn = 0, fp = 0, tp = 0, fn = 0;
  for (long j = 0; j < m; ++j) {
    const bool hat = std::abs(w_hat[j]) > zero_tol;
    const bool truth = std::abs(w_true[j]) > zero_tol;
    eval.support_hat[j] = hat;
    eval.support_true[j] = truth;
    if (truth) {
      hat ? ++tp : ++fn;
    } else {
      hat ? ++fp : ++tn;
    }
  }
  if (tn + fp > 0) eval.specificity = static_cast<double>(tn) / (tn + fp);
  if (tp + fn > 0) eval.sensitivity = static_cast<double>(tp) / (tp + fn);
  return eval;
}

FrequencyMap recovery_frequency(const std::vector<Eigen::VectorXd>& fits,
                                const NeighborhoodTemplate& tmpl, double zero_tol) {
  if (fits.empty()) throw std::invalid_argument("recovery frequency needs at least one fit");
  if (zero_tol < 0.0) throw std::invalid_argument("zero tolerance must be nonnegative");

  FrequencyMap map;
  map.tmpl = tmpl;
  map.counts.assign(tmpl.m, 0);
  map.total = static_cast<int>(fits.size());
  for (const Eigen::VectorXd& w : fits) {
    if (w.size() != tmpl.m) {
      throw std::invalid_argument("fit length does not match the template");
    }
    for (int j = 0; j < tmpl.m; ++j) {
      if (std::abs(w[j]) > zero_tol) ++map.counts[j];
    }
  }
  return map;
}

double rmse(const Eigen::VectorXd& y_hat, const Eigen::VectorXd& y) {
  if (y_hat.size() != y.size() || y_hat.size() == 0) {
    throw std::invalid_argument("prediction vectors must have equal positive length");
  }
  return (y_hat - y).norm() / std::sqrt(static_cast<double>(y.size()));
}

}  // namespace latsar
