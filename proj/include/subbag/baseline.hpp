#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>

#include "subbag/dataset.hpp"
#include "subbag/lasso.hpp"
#include "subbag/newton.hpp"

namespace subbag {

// Newton fit over all rows, streamed in chunks (the table itself is never
// required to be resident).
NewtonResult fit_full(const Dataset& data, Family family, const NewtonOptions& opts = {});

// Wraps a full fit as a single summary so the whole penalized pipeline can
// run on it: k = n, subsample_id = 0, seed = 0.
SubsampleSummary full_fit_summary(const Dataset& data, Family family,
                                  const NewtonOptions& opts = {});

struct BaselinePath {
  SubsampleSummary summary;    // the full-sample fit
  AggregatedQuadratic agg;     // degenerate aggregate (m = 1, k = n)
  Eigen::VectorXd weights;
  LambdaPath path;             // criterion: n * Ltilde + log(n) * df
};

// Full-sample penalized path: quadratic expansion around the full fit,
// adaptive weights from it, the same grid construction and coordinate
// descent as the subsampled pipeline, and the n-scaled information
// criterion.
BaselinePath adaptive_lasso_full(const Dataset& data, Family family, double gamma = 1.0,
                                 int n_grid = 100,
                                 std::optional<Eigen::Index> unpenalized = std::nullopt,
                                 const NewtonOptions& newton_opts = {},
                                 const CoordinateDescentOptions& cd_opts = {});

// Robust (sandwich) variance pieces at beta_hat, streamed over all rows:
//   sigma_hat = (1/n) sum_i (g_i - g_bar)(g_i - g_bar)'
//   v_hat     = (1/n) sum_i hess_i
//   psi       = (v_hat^{-1} sigma_hat v_hat^{-1}) restricted to `restrict`.
// SE_j = sqrt(psi_jj / n). Throws NumericalError if v_hat is singular.
struct SandwichVariance {
  Eigen::MatrixXd sigma_hat;
  Eigen::MatrixXd v_hat;
  Eigen::MatrixXd psi;  // restricted
};

SandwichVariance sandwich_variance(const Dataset& data, Family family,
                                   const Eigen::VectorXd& beta_hat,
                                   std::span<const Eigen::Index> restrict_to,
                                   Eigen::Index chunk_rows = 8192);

Eigen::VectorXd sandwich_standard_errors(const SandwichVariance& sv, std::uint64_t n);

}  // namespace subbag
