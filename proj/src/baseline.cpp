#include "subbag/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "subbag/error.hpp"

namespace subbag {

NewtonResult fit_full(const Dataset& data, Family family, const NewtonOptions& opts) {
  const Eigen::VectorXd init = Eigen::VectorXd::Zero(data.cols());
  return newton_fit(data, family, RowSelection::all(data.rows()), init, opts);
}

SubsampleSummary full_fit_summary(const Dataset& data, Family family,
                                  const NewtonOptions& opts) {
  NewtonResult fit = fit_full(data, family, opts);
  SubsampleSummary s;
  s.k = data.rows();
  s.subsample_id = 0;
  s.seed = 0;
  s.loss_at_opt = fit.loss;
  s.beta_tilde = std::move(fit.beta);
  s.hessian = std::move(fit.hessian);
  return s;
}

BaselinePath adaptive_lasso_full(const Dataset& data, Family family, double gamma, int n_grid,
                                 std::optional<Eigen::Index> unpenalized,
                                 const NewtonOptions& newton_opts,
                                 const CoordinateDescentOptions& cd_opts) {
  BaselinePath out;
  out.summary = full_fit_summary(data, family, newton_opts);
  out.agg = merge(std::span<const SubsampleSummary>(&out.summary, 1));
  out.weights = adaptive_weights(out.agg.beta_bar, gamma, unpenalized);
  std::vector<double> grid = default_lambda_grid(out.agg, out.weights, n_grid);
  out.path = solve_path(out.agg, out.weights, grid, data.rows(), data.rows(), cd_opts);
  return out;
}

SandwichVariance sandwich_variance(const Dataset& data, Family family,
                                   const Eigen::VectorXd& beta_hat,
                                   std::span<const Eigen::Index> restrict_to,
                                   Eigen::Index chunk_rows) {
  const Eigen::Index p = data.cols();
  const std::uint64_t n = data.rows();
  if (beta_hat.size() != p) {
    throw ConfigError("sandwich_variance: beta size differs from covariate count");
  }
  if (n == 0) {
    throw DataError("sandwich_variance: empty dataset");
  }
  if (restrict_to.empty()) {
    throw ConfigError("sandwich_variance: empty restriction set");
  }
  for (std::size_t i = 0; i < restrict_to.size(); ++i) {
    if (restrict_to[i] < 0 || restrict_to[i] >= p) {
      throw ConfigError("sandwich_variance: restriction index out of range");
    }
    if (i > 0 && restrict_to[i] <= restrict_to[i - 1]) {
      throw ConfigError("sandwich_variance: restriction set must be strictly ascending");
    }
  }

  Eigen::VectorXd grad_sum = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd gg_sum = Eigen::MatrixXd::Zero(p, p);
  Eigen::MatrixXd hess_sum = Eigen::MatrixXd::Zero(p, p);

  const auto chunk = static_cast<std::uint64_t>(std::max<Eigen::Index>(chunk_rows, 1));
  Eigen::VectorXd y(static_cast<Eigen::Index>(std::min<std::uint64_t>(chunk, n)));
  Eigen::MatrixXd x(y.size(), p);
  std::vector<std::uint64_t> idx(static_cast<std::size_t>(y.size()));

  for (std::uint64_t start = 0; start < n; start += chunk) {
    const auto len = static_cast<Eigen::Index>(std::min<std::uint64_t>(chunk, n - start));
    std::iota(idx.begin(), idx.begin() + len, start);
    auto yc = y.head(len);
    auto xc = x.topRows(len);
    data.gather(std::span<const std::uint64_t>(idx.data(), static_cast<std::size_t>(len)), yc, xc);

    // Per-row gradient g_i = coef_i * x_i.
    Eigen::ArrayXd coef(len);
    if (family == Family::Linear) {
      coef = -2.0 * (yc - xc * beta_hat).array();
    } else {
      Eigen::ArrayXd t = (xc * beta_hat).array();
      coef = (1.0 + (-t).exp()).inverse() - yc.array();
    }
    Eigen::MatrixXd g_rows = xc.array().colwise() * coef;
    grad_sum.noalias() += g_rows.colwise().sum().transpose();
    gg_sum.selfadjointView<Eigen::Lower>().rankUpdate(g_rows.transpose(), 1.0);

    Eigen::VectorXd unused = Eigen::VectorXd::Zero(p);
    add_grad_hess_sum(family, beta_hat, yc, xc, unused, hess_sum);
  }

  const double dn = static_cast<double>(n);
  Eigen::VectorXd g_bar = grad_sum / dn;
  SandwichVariance sv;
  sv.sigma_hat = gg_sum / dn;
  sv.sigma_hat.triangularView<Eigen::StrictlyUpper>() = sv.sigma_hat.transpose();
  sv.sigma_hat.noalias() -= g_bar * g_bar.transpose();
  sv.v_hat = hess_sum / dn;
  sv.v_hat.triangularView<Eigen::StrictlyUpper>() = sv.v_hat.transpose();

  Eigen::LLT<Eigen::MatrixXd> llt(sv.v_hat);
  if (llt.info() != Eigen::Success ||
      llt.rcond() < 16.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(p)) {
    throw NumericalError("sandwich_variance: curvature matrix is singular");
  }
  Eigen::MatrixXd vinv_sigma = llt.solve(sv.sigma_hat);
  Eigen::MatrixXd psi_full = llt.solve(vinv_sigma.transpose());

  const auto q = static_cast<Eigen::Index>(restrict_to.size());
  sv.psi.resize(q, q);
  for (Eigen::Index i = 0; i < q; ++i) {
    for (Eigen::Index j = 0; j < q; ++j) {
      sv.psi(i, j) = psi_full(restrict_to[static_cast<std::size_t>(i)],
                              restrict_to[static_cast<std::size_t>(j)]);
    }
  }
  return sv;
}

Eigen::VectorXd sandwich_standard_errors(const SandwichVariance& sv, std::uint64_t n) {
  if (n == 0) {
    throw ConfigError("sandwich_standard_errors: n must be >= 1");
  }
  Eigen::VectorXd se(sv.psi.rows());
  for (Eigen::Index j = 0; j < sv.psi.rows(); ++j) {
    const double v = sv.psi(j, j);
    se[j] = std::sqrt(std::max(v, 0.0) / static_cast<double>(n));
  }
  return se;
}

}  // namespace subbag
