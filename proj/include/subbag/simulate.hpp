#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "subbag/dataset.hpp"
#include "subbag/lasso.hpp"
#include "subbag/newton.hpp"
#include "subbag/plan.hpp"

namespace subbag {

// Synthetic-study configuration. Covariates are i.i.d. standard normal;
// responses follow the family at beta0. The default beta0 is
// (3, 1.5, 2, 0, 0, 0, 0, 0), so the true support is {0, 1, 2}.
struct SimConfig {
  Family family = Family::Logistic;
  std::uint64_t n = 100000;
  Eigen::VectorXd beta0;  // empty means default_beta0()
  double delta = 0.25;
  double alpha = 0.5;
  std::uint64_t k_override = 0;  // nonzero: use this k instead of deriving from delta
  std::uint64_t m_override = 0;  // nonzero: use this m instead of deriving from alpha
  double gamma = 1.0;
  int n_grid = 100;
  int n_reps = 200;
  std::uint64_t master_seed = 1;
  bool with_baseline = false;
  int threads = 1;
  NewtonOptions newton;
  CoordinateDescentOptions cd;
};

Eigen::VectorXd default_beta0();

// One synthetic dataset drawn from the configured model.
InMemoryDataset generate_dataset(Family family, std::uint64_t n, const Eigen::VectorXd& beta0,
                                 std::uint64_t seed);

// Estimation quality at the true-support coordinates, across replications.
// bias/sd/rmse/ase are in natural units (sd is the population form, divisor
// n_reps); cp is a coverage percentage of nominal-95% intervals using the
// conventional 1.96 critical value. ase/cp are NaN when m < 2 leaves the
// between-subsample variance undefined.
struct EstimationMetrics {
  std::vector<Eigen::Index> coords;
  Eigen::VectorXd bias;
  Eigen::VectorXd sd;
  Eigen::VectorXd rmse;  // sqrt(bias^2 + sd^2)
  Eigen::VectorXd ase;
  Eigen::VectorXd cp;
};

// Support recovery across replications: cf/tp/fp are percentages (correct
// fits; true positives over the true support; false positives over its
// complement), ms the mean selected-model size, sd_ms its population sd.
struct SelectionMetrics {
  double cf = 0.0;
  double tp = 0.0;
  double fp = 0.0;
  double ms = 0.0;
  double sd_ms = 0.0;
};

struct SimResult {
  std::uint64_t k = 0;
  std::uint64_t m = 0;
  int n_reps = 0;
  std::vector<Eigen::Index> true_support;
  EstimationMetrics est;
  SelectionMetrics sel;
  std::optional<EstimationMetrics> base_est;  // set when with_baseline
  std::optional<SelectionMetrics> base_sel;
};

// Runs the replication loop: per rep, draw a dataset, run the subsampled
// pipeline (and the full-sample baseline when asked), select by the
// information criterion, and score against beta0. Intervals are evaluated
// with the true support as the active set, per the usual reporting
// convention. Deterministic in master_seed for any thread count.
SimResult run_replications(const SimConfig& cfg);

// Mean over the true support of (subsampled sd / baseline sd)^2; the
// variance price of subsampling, expected near 1 + 1/alpha.
double variance_inflation_check(const SimResult& result);

}  // namespace subbag
