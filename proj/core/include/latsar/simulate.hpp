#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <optional>
#include <vector>

#include "latsar/lattice.hpp"
#include "latsar/rng.hpp"

namespace latsar {

enum class SchemeKind {
  Queen,           // 8 edge/vertex neighbors, each c/8
  Rook,            // 4 edge neighbors, each c/4
  AnisotropicEse,  // east + south-east, each c/2
  FromVector,      // arbitrary nonnegative vector over a template
};

/// Recipe for a spatial weight matrix. For the named schemes every interior
/// row sums to c; border rows renormalize over the neighbors that exist.
struct WeightScheme {
  SchemeKind kind = SchemeKind::Queen;
  double c = 0.5;

  // FromVector payload (ignored for the named schemes).
  NeighborhoodTemplate tmpl;
  Eigen::VectorXd w;

  static WeightScheme queen(double c);
  static WeightScheme rook(double c);
  static WeightScheme anisotropic_ese(double c);
  static WeightScheme from_vector(const NeighborhoodTemplate& tmpl, Eigen::VectorXd w);
};

/// Relative neighbor offsets of a named scheme, canonical template order.
std::vector<Offset> scheme_offsets(SchemeKind kind);

/// n x n nonnegative weight matrix with zero diagonal, stored row-major so
/// row sums and row-times-vector products are cheap.
struct SparseWeights {
  int n = 0;
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
};

Eigen::VectorXd row_sums(const SparseWeights& w);

/// Copy of `w` with every non-empty row rescaled to sum exactly 1
/// (the base matrix convention of the ML benchmark).
SparseWeights unit_row_normalized(const SparseWeights& w);

/// Simulated or ingested SAR sample: response, regressors, and (when the
/// generating process is known) the truth needed for evaluation.
struct SarDataset {
  Lattice lattice;
  Eigen::VectorXd y;
  Eigen::MatrixXd x;  // n x k

  std::optional<WeightScheme> true_scheme;
  std::optional<Eigen::VectorXd> beta_true;
  std::optional<double> sigma;

  int n() const { return lattice.n; }
  int k() const { return static_cast<int>(x.cols()); }
};

/// Materialize a scheme on a lattice. Named schemes place weight c/q on each
/// available neighbor, q = count of offsets inside the grid (rows with no
/// neighbor stay zero). FromVector places w over the template, dropping
/// entries that fall outside the grid.
SparseWeights build_weights(const Lattice& lattice, const WeightScheme& scheme);

/// W with row i carrying w over the template window of site i; entries
/// outside the grid are dropped. Requires w >= 0 and ||w||_1 < 1.
SparseWeights weights_from_vector(const Lattice& lattice, const NeighborhoodTemplate& tmpl,
                                  const Eigen::VectorXd& w);

/// Template-aligned vector whose nonzeros reproduce the scheme's interior
/// rows (used to compare estimates with the generating truth). Throws when a
/// scheme offset is not covered by the template.
Eigen::VectorXd scheme_template_vector(const WeightScheme& scheme,
                                       const NeighborhoodTemplate& tmpl);

/// n x k iid standard normal design.
Eigen::MatrixXd generate_design(int n, int k, Rng& rng);

/// Solve (I - W) y = rhs by sparse LU; verifies the relative residual is
/// within 1e-10 and throws NumericalError otherwise.
Eigen::VectorXd solve_sar(const SparseWeights& w, const Eigen::VectorXd& rhs);

/// Draw eps ~ N(0, sigma^2) and return the reduced-form response
/// Y = (I - W)^{-1} (X beta + eps). Requires all row sums of W below 1.
Eigen::VectorXd simulate_sar(const SparseWeights& w, const Eigen::MatrixXd& x,
                             const Eigen::VectorXd& beta, double sigma, Rng& rng);

struct SimulationSettings {
  WeightScheme scheme;
  int k = 1;
  Eigen::VectorXd beta;  // empty => ones(k)
  double sigma = 1.0;
};

/// Full simulated dataset (design + response + attached truth).
SarDataset simulate_dataset(const Lattice& lattice, const SimulationSettings& settings,
                            Rng& rng);

}  // namespace latsar
