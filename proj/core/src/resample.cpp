#include "latsar/resample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "latsar/errors.hpp"

namespace latsar {

int stage_ring(const NeighborhoodTemplate& tmpl, ResampleStage stage) {
  return stage == ResampleStage::FirstStep ? tmpl.ring : 2 * tmpl.ring;
}

std::vector<int> eligible_sites(const Lattice& lattice, const NeighborhoodTemplate& tmpl,
                                ResampleStage stage) {
  return interior_sites(lattice, stage_ring(tmpl, stage));
}

ReplicationCounts replication_counts(int n, int m) {
  if (!template_size_supported(m)) {
    throw std::invalid_argument("unsupported neighborhood size m=" + std::to_string(m));
  }
  const int sqrt_n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (sqrt_n * sqrt_n != n) {
    throw std::invalid_argument("replication counts need a square lattice; n=" +
                                std::to_string(n) + " is not a perfect square");
  }
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m + 1))));
  const int edge = sqrt_n - side;
  const int r_max = edge * edge;
  constexpr int r_min = 30;
  if (edge < 0 || r_max < r_min) {
    throw std::invalid_argument("lattice too small: (sqrt(n) - sqrt(m+1))^2 = " +
                                std::to_string(r_max) + " is below the minimum of 30");
  }
  return ReplicationCounts{r_min, (r_min + r_max) / 2, r_max};
}

std::vector<int> draw_sites(const std::vector<int>& eligible, int r, bool with_replacement,
                            Rng& rng) {
  if (r < 1) throw std::invalid_argument("replication count must be positive");
  const int count = static_cast<int>(eligible.size());
  if (count == 0) throw std::invalid_argument("no eligible sites to sample from");

  std::vector<int> sites;
  sites.reserve(r);
  if (with_replacement) {
    std::uniform_int_distribution<int> pick(0, count - 1);
    for (int i = 0; i < r; ++i) sites.push_back(eligible[pick(rng)]);
    return sites;
  }

  if (r > count) {
    throw std::invalid_argument("cannot sample " + std::to_string(r) +
                                " distinct sites from " + std::to_string(count) +
                                " eligible ones");
  }
  // partial Fisher-Yates: the first r entries of the shuffle
  std::vector<int> pool = eligible;
  for (int i = 0; i < r; ++i) {
    std::uniform_int_distribution<int> pick(i, count - 1);
    std::swap(pool[i], pool[pick(rng)]);
    sites.push_back(pool[i]);
  }
  return sites;
}

ResamplePlan sample_sites(const std::vector<int>& eligible, int r,
                          const NeighborhoodTemplate& tmpl, ResampleStage stage, Rng& rng) {
  return ResamplePlan{draw_sites(eligible, r, /*with_replacement=*/false, rng), tmpl, stage};
}

ResamplePlan plan_from_sites(const Lattice& lattice, std::vector<int> sites,
                             const NeighborhoodTemplate& tmpl, ResampleStage stage) {
  const int ring = stage_ring(tmpl, stage);
  for (int site : sites) {
    if (site < 0 || site >= lattice.n || !is_interior(lattice, site, ring)) {
      throw std::invalid_argument("site " + std::to_string(site) +
                                  " is not interior for ring " + std::to_string(ring));
    }
  }
  return ResamplePlan{std::move(sites), tmpl, stage};
}

FirstStepDesign build_first_step(const SarDataset& dataset, const ResamplePlan& plan) {
  if (plan.stage != ResampleStage::FirstStep) {
    throw std::invalid_argument("plan was drawn for the wrong stage");
  }
  const int k = dataset.k();
  const int m = plan.tmpl.m;
  const int r = plan.r();
  const int l = k * (m + 1);

  FirstStepDesign design;
  design.y.resize(r);
  design.z.resize(r, l);
  for (int i = 0; i < r; ++i) {
    const int site = plan.sites[i];
    design.y[i] = dataset.y[site];
    design.z.block(i, 0, 1, k) = dataset.x.row(site);  // own-site regressors first
    const std::vector<int> window = window_indices(dataset.lattice, site, plan.tmpl);
    for (int j = 0; j < m; ++j) {
      design.z.block(i, k * (j + 1), 1, k) = dataset.x.row(window[j]);
    }
  }
  return design;
}

PredictedField predict_endogenous(const Eigen::VectorXd& theta, double intercept,
                                  const SarDataset& dataset,
                                  const NeighborhoodTemplate& tmpl) {
  const int k = dataset.k();
  const int m = tmpl.m;
  if (theta.size() != static_cast<long>(k) * (m + 1)) {
    throw std::invalid_argument("theta length " + std::to_string(theta.size()) +
                                " does not match l = k*(m+1) = " +
                                std::to_string(k * (m + 1)));
  }

  PredictedField field;
  field.value = Eigen::VectorXd::Zero(dataset.n());
  field.valid.assign(dataset.n(), false);
  for (int site : interior_sites(dataset.lattice, tmpl.ring)) {
    double value = intercept + dataset.x.row(site).dot(theta.head(k));
    const std::vector<int> window = window_indices(dataset.lattice, site, tmpl);
    for (int j = 0; j < m; ++j) {
      value += dataset.x.row(window[j]).dot(theta.segment(k * (j + 1), k));
    }
    field.value[site] = value;
    field.valid[site] = true;
  }
  return field;
}

SecondStepDesign build_second_step(const SarDataset& dataset, const PredictedField& predicted,
                                   const ResamplePlan& plan) {
  if (plan.stage != ResampleStage::SecondStep) {
    throw std::invalid_argument("plan was drawn for the wrong stage");
  }
  if (predicted.value.size() != dataset.n() ||
      static_cast<int>(predicted.valid.size()) != dataset.n()) {
    throw std::invalid_argument("predicted field does not match the lattice");
  }
  const int k = dataset.k();
  const int m = plan.tmpl.m;
  const int r = plan.r();

  SecondStepDesign design;
  design.y.resize(r);
  design.x.resize(r, k);
  design.ybreve.resize(r, m);
  for (int i = 0; i < r; ++i) {
    const int site = plan.sites[i];
    design.y[i] = dataset.y[site];
    design.x.row(i) = dataset.x.row(site);
    const std::vector<int> window = window_indices(dataset.lattice, site, plan.tmpl);
    for (int j = 0; j < m; ++j) {
      if (!predicted.valid[window[j]]) {
        throw ConstraintError("site " + std::to_string(site) +
                              " has a neighbor without a first-step prediction");
      }
      design.ybreve(i, j) = predicted.value[window[j]];
    }
  }
  return design;
}

}  // namespace latsar
