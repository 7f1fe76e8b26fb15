#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "subbag/aggregate.hpp"

namespace subbag {

double soft_threshold(double z, double threshold);

struct RegularizedFit {
  double lambda = 0.0;
  Eigen::VectorXd beta_hat;
  std::vector<Eigen::Index> active_set;  // nonzero coordinates, ascending
  Eigen::Index df = 0;
  double sbic = std::numeric_limits<double>::quiet_NaN();  // filled by solve_path
  bool converged = false;
  int n_sweeps = 0;
  std::vector<Eigen::Index> frozen;  // h_bar diagonal zero: pinned at 0
};

struct CoordinateDescentOptions {
  double kkt_tol = 1e-8;
  int max_sweeps = 10000;
};

// Minimizes  Ltilde(beta) + lambda * sum_j w_j |beta_j|  by cyclic coordinate
// descent with exact per-coordinate minimization
//   beta_j <- soft_threshold(b_j - sum_{l != j} h_jl beta_l, lambda w_j / 2) / h_jj.
// Coordinates with w_j = +inf are pinned at zero (for any lambda, including
// 0); coordinates with h_jj = 0 and finite w_j cannot be updated and are
// pinned at zero too, reported through `frozen`. Convergence requires the
// KKT conditions to hold within kkt_tol:
//   beta_j != 0:  |2 (h_bar beta - b)_j + lambda w_j sign(beta_j)| <= kkt_tol
//   beta_j == 0:  |2 (h_bar beta - b)_j| <= lambda w_j + kkt_tol.
// Throws NumericalError if max_sweeps is exhausted first. If objective_trace
// is given, the penalized objective after each sweep is appended to it.
RegularizedFit solve_penalized(const AggregatedQuadratic& agg, double lambda,
                               const Eigen::VectorXd& weights,
                               const Eigen::VectorXd& warm_start,
                               const CoordinateDescentOptions& opts = {},
                               std::vector<double>* objective_trace = nullptr);

// Max KKT violation of beta for the given problem (coordinates with infinite
// weight are exempt; they are pinned rather than penalized).
double kkt_residual(const AggregatedQuadratic& agg, double lambda,
                    const Eigen::VectorXd& weights, const Eigen::VectorXd& beta);

// Log-spaced descending grid from lambda_max down to lambda_max * 1e-6, where
// lambda_max = 2 max_j |b_j| / w_j over coordinates with finite positive
// weight (the smallest lambda whose solution from a zero start is all-zero).
std::vector<double> default_lambda_grid(const AggregatedQuadratic& agg,
                                        const Eigen::VectorXd& weights, int n_grid = 100);

// k_n * Ltilde(beta_hat) + log(n) * df. The subsample size k_n undoes the
// per-row averaging in Ltilde so the fit term is on the likelihood-ratio
// scale that the log(n) penalty expects.
double sbic(const AggregatedQuadratic& agg, const RegularizedFit& fit, std::uint64_t k_n,
            std::uint64_t n);

struct LambdaPath {
  std::vector<double> grid;
  std::vector<RegularizedFit> fits;
  std::size_t selected = 0;
};

// Solves the grid in descending order with warm starts and fills each fit's
// sbic; `selected` is the sbic argmin, ties resolved toward the larger
// lambda (the sparser end).
LambdaPath solve_path(const AggregatedQuadratic& agg, const Eigen::VectorXd& weights,
                      std::span<const double> grid, std::uint64_t k_n, std::uint64_t n,
                      const CoordinateDescentOptions& opts = {});

const RegularizedFit& select_lambda(const LambdaPath& path);

}  // namespace subbag
