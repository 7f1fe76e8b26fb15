#include "subbag/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "subbag/error.hpp"

namespace subbag {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_problem(const AggregatedQuadratic& agg, double lambda,
                   const Eigen::VectorXd& weights) {
  const Eigen::Index p = agg.b.size();
  if (agg.h_bar.rows() != p || agg.h_bar.cols() != p) {
    throw ConfigError("solve_penalized: aggregate dimensions inconsistent");
  }
  if (weights.size() != p) {
    throw ConfigError("solve_penalized: weight vector size mismatch");
  }
  if (!(lambda >= 0.0)) {
    throw ConfigError("solve_penalized: lambda must be >= 0");
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    if (std::isnan(weights[j]) || weights[j] < 0.0) {
      throw ConfigError("solve_penalized: weights must be >= 0");
    }
  }
}

double penalty_value(double lambda, const Eigen::VectorXd& weights, const Eigen::VectorXd& beta) {
  double pen = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (weights[j] != kInf) pen += weights[j] * std::abs(beta[j]);
  }
  return lambda * pen;
}

}  // namespace

double soft_threshold(double z, double threshold) {
  if (z > threshold) return z - threshold;
  if (z < -threshold) return z + threshold;
  return 0.0;
}

double kkt_residual(const AggregatedQuadratic& agg, double lambda,
                    const Eigen::VectorXd& weights, const Eigen::VectorXd& beta) {
  Eigen::VectorXd g = 2.0 * (agg.h_bar * beta - agg.b);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (weights[j] == kInf) continue;  // pinned, not penalized
    double v;
    if (beta[j] != 0.0) {
      v = std::abs(g[j] + lambda * weights[j] * (beta[j] > 0.0 ? 1.0 : -1.0));
    } else {
      v = std::max(0.0, std::abs(g[j]) - lambda * weights[j]);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

RegularizedFit solve_penalized(const AggregatedQuadratic& agg, double lambda,
                               const Eigen::VectorXd& weights,
                               const Eigen::VectorXd& warm_start,
                               const CoordinateDescentOptions& opts,
                               std::vector<double>* objective_trace) {
  check_problem(agg, lambda, weights);
  const Eigen::Index p = agg.b.size();
  if (warm_start.size() != p) {
    throw ConfigError("solve_penalized: warm start size mismatch");
  }

  RegularizedFit fit;
  fit.lambda = lambda;
  fit.beta_hat = warm_start;

  // Coordinates that can move: finite weight and a positive curvature.
  std::vector<Eigen::Index> movable;
  movable.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    if (weights[j] == kInf) {
      fit.beta_hat[j] = 0.0;
    } else if (agg.h_bar(j, j) <= 0.0) {
      fit.beta_hat[j] = 0.0;
      fit.frozen.push_back(j);
    } else {
      movable.push_back(j);
    }
  }

  Eigen::VectorXd hb = agg.h_bar * fit.beta_hat;

  bool converged = false;
  int sweeps = 0;
  while (sweeps < opts.max_sweeps) {
    ++sweeps;
    double max_delta = 0.0;
    for (Eigen::Index j : movable) {
      const double hjj = agg.h_bar(j, j);
      const double old = fit.beta_hat[j];
      const double z = agg.b[j] - (hb[j] - hjj * old);
      const double updated = soft_threshold(z, 0.5 * lambda * weights[j]) / hjj;
      if (updated != old) {
        hb.noalias() += agg.h_bar.col(j) * (updated - old);
        fit.beta_hat[j] = updated;
        max_delta = std::max(max_delta, std::abs(updated - old));
      }
    }
    if (objective_trace) {
      objective_trace->push_back(subbagging_loss(agg, fit.beta_hat) +
                                 penalty_value(lambda, weights, fit.beta_hat));
    }
    const double scale = std::max(1.0, fit.beta_hat.lpNorm<Eigen::Infinity>());
    if (max_delta <= opts.kkt_tol * scale &&
        kkt_residual(agg, lambda, weights, fit.beta_hat) <= opts.kkt_tol) {
      converged = true;
      break;
    }
  }

  if (!converged) {
    throw NumericalError("solve_penalized: no convergence in " + std::to_string(opts.max_sweeps) +
                         " sweeps (KKT residual " +
                         std::to_string(kkt_residual(agg, lambda, weights, fit.beta_hat)) + ")");
  }

  fit.converged = true;
  fit.n_sweeps = sweeps;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (fit.beta_hat[j] != 0.0) fit.active_set.push_back(j);
  }
  fit.df = static_cast<Eigen::Index>(fit.active_set.size());
  return fit;
}

std::vector<double> default_lambda_grid(const AggregatedQuadratic& agg,
                                        const Eigen::VectorXd& weights, int n_grid) {
  check_problem(agg, 0.0, weights);
  if (n_grid < 1) {
    throw ConfigError("default_lambda_grid: n_grid must be >= 1");
  }
  double lambda_max = 0.0;
  bool any = false;
  for (Eigen::Index j = 0; j < weights.size(); ++j) {
    if (weights[j] > 0.0 && weights[j] != kInf) {
      any = true;
      lambda_max = std::max(lambda_max, 2.0 * std::abs(agg.b[j]) / weights[j]);
    }
  }
  if (!any) {
    throw ConfigError("default_lambda_grid: no coordinate carries a finite positive weight");
  }
  if (lambda_max <= 0.0) {
    throw NumericalError("default_lambda_grid: degenerate problem, all penalized score terms zero");
  }
  std::vector<double> grid(static_cast<std::size_t>(n_grid));
  if (n_grid == 1) {
    grid[0] = lambda_max;
    return grid;
  }
  const double log_ratio = std::log(1e-6);
  for (int i = 0; i < n_grid; ++i) {
    grid[static_cast<std::size_t>(i)] =
        lambda_max * std::exp(log_ratio * static_cast<double>(i) / static_cast<double>(n_grid - 1));
  }
  return grid;
}

double sbic(const AggregatedQuadratic& agg, const RegularizedFit& fit, std::uint64_t k_n,
            std::uint64_t n) {
  if (k_n == 0 || n == 0) {
    throw ConfigError("sbic: k_n and n must be >= 1");
  }
  return static_cast<double>(k_n) * subbagging_loss(agg, fit.beta_hat) +
         std::log(static_cast<double>(n)) * static_cast<double>(fit.df);
}

LambdaPath solve_path(const AggregatedQuadratic& agg, const Eigen::VectorXd& weights,
                      std::span<const double> grid, std::uint64_t k_n, std::uint64_t n,
                      const CoordinateDescentOptions& opts) {
  if (grid.empty()) {
    throw ConfigError("solve_path: empty lambda grid");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0)) throw ConfigError("solve_path: lambda grid must be nonnegative");
    if (i > 0 && !(grid[i] < grid[i - 1])) {
      throw ConfigError("solve_path: lambda grid must be strictly decreasing");
    }
  }

  LambdaPath path;
  path.grid.assign(grid.begin(), grid.end());
  path.fits.reserve(grid.size());
  Eigen::VectorXd warm = Eigen::VectorXd::Zero(agg.b.size());
  for (double lambda : grid) {
    RegularizedFit fit = solve_penalized(agg, lambda, weights, warm, opts);
    fit.sbic = sbic(agg, fit, k_n, n);
    warm = fit.beta_hat;
    path.fits.push_back(std::move(fit));
  }

  path.selected = 0;
  for (std::size_t i = 1; i < path.fits.size(); ++i) {
    if (path.fits[i].sbic < path.fits[path.selected].sbic) path.selected = i;
  }
  return path;
}

const RegularizedFit& select_lambda(const LambdaPath& path) {
  if (path.fits.empty()) {
    throw ConfigError("select_lambda: empty path");
  }
  return path.fits[path.selected];
}

}  // namespace subbag
