#include "latsar/montecarlo.hpp"

#include <charconv>
#include <stdexcept>
#include <vector>

#include "latsar/errors.hpp"
#include "latsar/parallel.hpp"
#include "latsar/resample.hpp"
#include "latsar/rng.hpp"

namespace latsar {

RMode parse_r_mode(const std::string& text, int* r_explicit) {
  if (text == "min") return RMode::Min;
  if (text == "med") return RMode::Med;
  if (text == "max") return RMode::Max;
  int value = 0;
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), last, value);
  if (ec == std::errc() && ptr == last && value > 0) {
    if (r_explicit) *r_explicit = value;
    return RMode::Explicit;
  }
  throw std::invalid_argument(
      "replication mode must be min, med, max, or a positive integer; got \"" + text + "\"");
}

std::string r_mode_name(RMode mode) {
  switch (mode) {
    case RMode::Min:
      return "min";
    case RMode::Med:
      return "med";
    case RMode::Max:
      return "max";
    case RMode::Explicit:
      return "explicit";
  }
  throw std::invalid_argument("unknown replication mode");
}

int resolve_replications(const CellSpec& spec) {
  if (spec.r_mode == RMode::Explicit) {
    if (spec.r_explicit < 1) {
      throw std::invalid_argument("explicit replication count must be positive");
    }
    return spec.r_explicit;
  }
  const ReplicationCounts counts = replication_counts(spec.nrows * spec.ncols, spec.m);
  switch (spec.r_mode) {
    case RMode::Min:
      return counts.r_min;
    case RMode::Med:
      return counts.r_med;
    default:
      return counts.r_max;
  }
}

CellResult run_cell(const CellSpec& spec) {
  if (spec.iterations < 1) {
    throw std::invalid_argument("a cell needs at least one iteration");
  }
  const Lattice lattice = Lattice::create(spec.nrows, spec.ncols);
  const NeighborhoodTemplate tmpl = neighbor_template(spec.m);
  const int r = resolve_replications(spec);

  SimulationSettings settings;
  settings.scheme = spec.scheme;
  settings.k = spec.k;
  settings.beta = spec.beta;
  settings.sigma = spec.sigma;
  const Eigen::VectorXd beta_true =
      spec.beta.size() > 0 ? spec.beta : Eigen::VectorXd::Ones(spec.k);
  const Eigen::VectorXd w_true = scheme_template_vector(spec.scheme, tmpl);

  struct Slot {
    bool ok = false;
    Eigen::VectorXd w;
    Eigen::VectorXd beta;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(spec.iterations));

  // Each iteration derives everything from its own seed, so the averages do
  // not depend on how the loop is split across threads.
  parallel_for(spec.iterations, spec.jobs, [&](long i) {
    const std::uint64_t iter_seed = mix_seed(spec.seed, static_cast<std::uint64_t>(i));
    Rng rng = make_rng(iter_seed, 0);
    const SarDataset dataset = simulate_dataset(lattice, settings, rng);

    EstimatorConfig config;
    config.m = spec.m;
    config.r1 = r;
    config.gamma = spec.gamma;
    config.folds = spec.folds;
    config.seed = mix_seed(iter_seed, 1);
    config.solver = spec.solver;
    try {
      TwoStepFit fit = two_step_fit(dataset, config);
      slots[i].w = std::move(fit.w_hat);
      slots[i].beta = std::move(fit.beta_hat);
      slots[i].ok = true;
    } catch (const NumericalError&) {
      // counted as a failed iteration below
    }
  });

  CellResult result;
  result.r = r;
  result.iterations = spec.iterations;

  std::vector<Eigen::VectorXd> w_fits;
  w_fits.reserve(slots.size());
  double mae_w_sum = 0.0;
  double mae_beta_sum = 0.0;
  double pi0_sum = 0.0;
  double pi1_sum = 0.0;
  bool has_pi0 = false;
  bool has_pi1 = false;
  for (const Slot& slot : slots) {
    if (!slot.ok) {
      ++result.failures;
      continue;
    }
    const WeightEval eval = support_stats(slot.w, w_true);
    mae_w_sum += eval.mae;
    mae_beta_sum += mae(slot.beta, beta_true);
    if (eval.specificity) {
      pi0_sum += *eval.specificity;
      has_pi0 = true;
    }
    if (eval.sensitivity) {
      pi1_sum += *eval.sensitivity;
      has_pi1 = true;
    }
    w_fits.push_back(slot.w);
  }
  if (w_fits.empty()) {
    throw NumericalError("every iteration of the Monte Carlo cell failed");
  }
  const double ok = static_cast<double>(w_fits.size());
  result.mae_w = mae_w_sum / ok;
  result.mae_beta = mae_beta_sum / ok;
  if (has_pi0) result.pi0 = pi0_sum / ok;
  if (has_pi1) result.pi1 = pi1_sum / ok;
  result.freq = recovery_frequency(w_fits, tmpl);
  return result;
}

}  // namespace latsar
