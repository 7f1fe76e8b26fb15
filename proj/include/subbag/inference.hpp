#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "subbag/engine.hpp"

namespace subbag {

// Standard normal CDF (via erfc) and quantile (rational approximation plus
// one Halley refinement; absolute error well under 1e-9).
double normal_cdf(double z);
double normal_quantile(double p);

// Between-subsample variance on the active coordinates:
//   Psi = (k/m) sum_s (beta_tilde_s - beta_bar)(beta_tilde_s - beta_bar)'
// restricted to `active`, with beta_bar the mean of the beta_tilde_s. The
// unpenalized subsample fits carry the spread; requires m >= 2.
Eigen::MatrixXd variance_estimator(std::span<const SubsampleSummary> summaries,
                                   std::span<const Eigen::Index> active);

// SE_j = sqrt( (1 + n/(k m)) Psi_jj / n ). The 1 + n/(km) factor is the
// price of fitting on k*m rows' worth of subsamples instead of all n.
Eigen::VectorXd standard_errors(const Eigen::MatrixXd& psi, std::uint64_t n, std::uint64_t k,
                                std::uint64_t m);

struct WaldResult {
  Eigen::VectorXd ci_low;
  Eigen::VectorXd ci_high;
  Eigen::VectorXd p_value;          // two-sided, for H0: beta_j = 0
  std::vector<bool> degenerate;     // SE_j == 0: interval collapses, p is 0 or 1
};

WaldResult wald_intervals(const Eigen::VectorXd& beta_active, const Eigen::VectorXd& se,
                          double level);

struct InferenceReport {
  std::vector<Eigen::Index> active_set;
  Eigen::VectorXd estimate;  // estimates at the active coordinates
  Eigen::MatrixXd psi_hat;
  Eigen::VectorXd se;
  Eigen::VectorXd ci_low;
  Eigen::VectorXd ci_high;
  Eigen::VectorXd p_value;
  std::vector<bool> degenerate;
  double inflation = 0.0;  // 1 + n/(k m)
  double level = 0.95;
};

// estimates_full holds all p coordinates (typically the selected penalized
// fit); the report is restricted to `active`.
InferenceReport build_inference(std::span<const SubsampleSummary> summaries,
                                const Eigen::VectorXd& estimates_full,
                                std::span<const Eigen::Index> active, std::uint64_t n,
                                double level = 0.95);

}  // namespace subbag
