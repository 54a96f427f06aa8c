#include "latsar/simulate.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "latsar/errors.hpp"

namespace latsar {

namespace {

void check_strength(double c) {
  if (!(c >= 0.0) || c >= 1.0) {
    throw ConstraintError("dependence strength c must lie in [0, 1), got " +
                          std::to_string(c));
  }
}

}  // namespace

WeightScheme WeightScheme::queen(double c) {
  check_strength(c);
  WeightScheme s;
  s.kind = SchemeKind::Queen;
  s.c = c;
  return s;
}

WeightScheme WeightScheme::rook(double c) {
  check_strength(c);
  WeightScheme s;
  s.kind = SchemeKind::Rook;
  s.c = c;
  return s;
}

WeightScheme WeightScheme::anisotropic_ese(double c) {
  check_strength(c);
  WeightScheme s;
  s.kind = SchemeKind::AnisotropicEse;
  s.c = c;
  return s;
}

WeightScheme WeightScheme::from_vector(const NeighborhoodTemplate& tmpl, Eigen::VectorXd w) {
  if (w.size() != tmpl.m) {
    throw std::invalid_argument("weight vector length " + std::to_string(w.size()) +
                                " does not match template size " + std::to_string(tmpl.m));
  }
  WeightScheme s;
  s.kind = SchemeKind::FromVector;
  s.tmpl = tmpl;
  s.w = std::move(w);
  s.c = s.w.cwiseAbs().sum();
  return s;
}

std::vector<Offset> scheme_offsets(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::Queen:
      // canonical order: edge neighbors first, then diagonals
      return {{-1, 0}, {0, -1}, {0, 1}, {1, 0}, {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
    case SchemeKind::Rook:
      return {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};
    case SchemeKind::AnisotropicEse:
      return {{0, 1}, {1, 1}};  // east, south-east
    case SchemeKind::FromVector:
      throw std::invalid_argument("FromVector schemes carry their own template offsets");
  }
  throw std::invalid_argument("unknown scheme kind");
}

Eigen::VectorXd row_sums(const SparseWeights& w) {
  return w.matrix * Eigen::VectorXd::Ones(w.n);
}

SparseWeights unit_row_normalized(const SparseWeights& w) {
  SparseWeights out = w;
  const Eigen::VectorXd sums = row_sums(w);
  for (int i = 0; i < out.matrix.outerSize(); ++i) {
    if (sums[i] <= 0.0) continue;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(out.matrix, i); it;
         ++it) {
      it.valueRef() /= sums[i];
    }
  }
  return out;
}

SparseWeights weights_from_vector(const Lattice& lattice, const NeighborhoodTemplate& tmpl,
                                  const Eigen::VectorXd& w) {
  if (w.size() != tmpl.m) {
    throw std::invalid_argument("weight vector length " + std::to_string(w.size()) +
                                " does not match template size " + std::to_string(tmpl.m));
  }
  if ((w.array() < 0.0).any()) {
    throw ConstraintError("weight vector has a negative entry");
  }
  const double norm = w.sum();
  if (norm >= 1.0) {
    throw ConstraintError("weight vector l1 norm must be below 1, got " +
                          std::to_string(norm));
  }

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(lattice.n) * static_cast<std::size_t>(tmpl.m) / 2);
  for (int site = 0; site < lattice.n; ++site) {
    const auto [row, col] = lattice.row_col(site);
    for (int j = 0; j < tmpl.m; ++j) {
      if (w[j] == 0.0) continue;
      const int r = row + tmpl.offsets[j].drow;
      const int c = col + tmpl.offsets[j].dcol;
      if (!lattice.contains(r, c)) continue;  // entries outside the grid are dropped
      entries.emplace_back(site, lattice.site(r, c), w[j]);
    }
  }
  SparseWeights out;
  out.n = lattice.n;
  out.matrix.resize(lattice.n, lattice.n);
  out.matrix.setFromTriplets(entries.begin(), entries.end());
  return out;
}

SparseWeights build_weights(const Lattice& lattice, const WeightScheme& scheme) {
  if (scheme.kind == SchemeKind::FromVector) {
    return weights_from_vector(lattice, scheme.tmpl, scheme.w);
  }
  check_strength(scheme.c);

  const std::vector<Offset> offsets = scheme_offsets(scheme.kind);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(lattice.n) * offsets.size());
  std::vector<int> neighbors;
  for (int site = 0; site < lattice.n; ++site) {
    const auto [row, col] = lattice.row_col(site);
    neighbors.clear();
    for (const Offset& o : offsets) {
      const int r = row + o.drow;
      const int c = col + o.dcol;
      if (lattice.contains(r, c)) neighbors.push_back(lattice.site(r, c));
    }
    if (neighbors.empty() || scheme.c == 0.0) continue;
    // renormalize over the neighbors that exist so the row still sums to c
    const double weight = scheme.c / static_cast<double>(neighbors.size());
    for (int nbr : neighbors) entries.emplace_back(site, nbr, weight);
  }
  SparseWeights out;
  out.n = lattice.n;
  out.matrix.resize(lattice.n, lattice.n);
  out.matrix.setFromTriplets(entries.begin(), entries.end());
  return out;
}

Eigen::VectorXd scheme_template_vector(const WeightScheme& scheme,
                                       const NeighborhoodTemplate& tmpl) {
  Eigen::VectorXd vec = Eigen::VectorXd::Zero(tmpl.m);
  if (scheme.kind == SchemeKind::FromVector) {
    for (int j = 0; j < scheme.tmpl.m; ++j) {
      if (scheme.w[j] == 0.0) continue;
      const int pos = tmpl.position(scheme.tmpl.offsets[j]);
      if (pos < 0) {
        throw ConstraintError("scheme offset falls outside the requested template");
      }
      vec[pos] = scheme.w[j];
    }
    return vec;
  }
  const std::vector<Offset> offsets = scheme_offsets(scheme.kind);
  const double weight = scheme.c / static_cast<double>(offsets.size());
  for (const Offset& o : offsets) {
    const int pos = tmpl.position(o);
    if (pos < 0) {
      throw ConstraintError("scheme offset falls outside the requested template");
    }
    vec[pos] = weight;
  }
  return vec;
}

Eigen::MatrixXd generate_design(int n, int k, Rng& rng) {
  if (n < 1 || k < 1) throw std::invalid_argument("design dimensions must be positive");
  std::normal_distribution<double> standard_normal(0.0, 1.0);
  Eigen::MatrixXd x(n, k);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) x(i, j) = standard_normal(rng);
  }
  return x;
}

Eigen::VectorXd solve_sar(const SparseWeights& w, const Eigen::VectorXd& rhs) {
  if (rhs.size() != w.n) throw std::invalid_argument("rhs length does not match matrix size");

  Eigen::SparseMatrix<double> system(w.n, w.n);
  system.setIdentity();
  system -= Eigen::SparseMatrix<double>(w.matrix);

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(system);
  if (lu.info() != Eigen::Success) {
    throw NumericalError("sparse LU factorization of (I - W) failed: matrix is singular "
                         "or near-singular");
  }
  Eigen::VectorXd y = lu.solve(rhs);
  if (lu.info() != Eigen::Success) {
    throw NumericalError("sparse LU solve of (I - W) y = rhs failed");
  }

  const double scale = std::max({1.0, rhs.lpNorm<Eigen::Infinity>(),
                                 y.lpNorm<Eigen::Infinity>()});
  const double residual = (system * y - rhs).lpNorm<Eigen::Infinity>();
  if (!(residual <= 1e-10 * scale)) {
    throw NumericalError("SAR solve residual " + std::to_string(residual) +
                         " exceeds tolerance; (I - W) is badly conditioned");
  }
  return y;
}

Eigen::VectorXd simulate_sar(const SparseWeights& w, const Eigen::MatrixXd& x,
                             const Eigen::VectorXd& beta, double sigma, Rng& rng) {
  if (x.rows() != w.n) throw std::invalid_argument("design rows do not match matrix size");
  if (beta.size() != x.cols()) {
    throw std::invalid_argument("beta length does not match design columns");
  }
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
  const double max_row_sum = w.n > 0 ? row_sums(w).maxCoeff() : 0.0;
  if (max_row_sum >= 1.0) {
    throw ConstraintError("all row sums of W must be below 1 for the reduced form, max is " +
                          std::to_string(max_row_sum));
  }

  std::normal_distribution<double> standard_normal(0.0, 1.0);
  Eigen::VectorXd rhs = x * beta;
  for (int i = 0; i < w.n; ++i) rhs[i] += sigma * standard_normal(rng);
  return solve_sar(w, rhs);
}

SarDataset simulate_dataset(const Lattice& lattice, const SimulationSettings& settings,
                            Rng& rng) {
  if (settings.k < 1) throw std::invalid_argument("k must be positive");
  Eigen::VectorXd beta = settings.beta;
  if (beta.size() == 0) beta = Eigen::VectorXd::Ones(settings.k);
  if (beta.size() != settings.k) {
    throw std::invalid_argument("beta length does not match k");
  }

  SarDataset dataset;
  dataset.lattice = lattice;
  dataset.x = generate_design(lattice.n, settings.k, rng);  // design drawn before noise
  const SparseWeights w = build_weights(lattice, settings.scheme);
  dataset.y = simulate_sar(w, dataset.x, beta, settings.sigma, rng);
  dataset.true_scheme = settings.scheme;
  dataset.beta_true = beta;
  dataset.sigma = settings.sigma;
  return dataset;
}

}  // namespace latsar
