#include "subbag/inference.hpp"

#include <cmath>
#include <string>

#include "subbag/error.hpp"

namespace subbag {

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw ConfigError("normal_quantile: p must lie in (0, 1)");
  }
  // Acklam's rational approximation in three regimes...
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;

  double x;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // ... then one Halley step against the exact CDF.
  double e = normal_cdf(x) - p;
  double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

Eigen::MatrixXd variance_estimator(std::span<const SubsampleSummary> summaries,
                                   std::span<const Eigen::Index> active) {
  if (summaries.size() < 2) {
    throw ConfigError("variance_estimator: needs at least two subsample summaries");
  }
  if (active.empty()) {
    throw ConfigError("variance_estimator: empty active set");
  }
  const Eigen::Index p = summaries[0].beta_tilde.size();
  const std::uint64_t k = summaries[0].k;
  for (const auto& s : summaries) {
    if (s.beta_tilde.size() != p) {
      throw ConfigError("variance_estimator: summary dimension mismatch");
    }
    if (s.k != k) {
      throw ConfigError("variance_estimator: summaries disagree on k");
    }
  }
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (active[i] < 0 || active[i] >= p) {
      throw ConfigError("variance_estimator: active index out of range");
    }
    if (i > 0 && active[i] <= active[i - 1]) {
      throw ConfigError("variance_estimator: active set must be strictly ascending");
    }
  }

  const double m = static_cast<double>(summaries.size());
  Eigen::VectorXd beta_bar = Eigen::VectorXd::Zero(p);
  for (const auto& s : summaries) beta_bar += s.beta_tilde;
  beta_bar /= m;

  const auto q = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(q, q);
  Eigen::VectorXd diff(q);
  for (const auto& s : summaries) {
    for (Eigen::Index j = 0; j < q; ++j) {
      diff[j] = s.beta_tilde[active[static_cast<std::size_t>(j)]] -
                beta_bar[active[static_cast<std::size_t>(j)]];
    }
    psi.selfadjointView<Eigen::Lower>().rankUpdate(diff, 1.0);
  }
  psi *= static_cast<double>(k) / m;
  psi.triangularView<Eigen::StrictlyUpper>() = psi.transpose();
  return psi;
}

Eigen::VectorXd standard_errors(const Eigen::MatrixXd& psi, std::uint64_t n, std::uint64_t k,
                                std::uint64_t m) {
  if (psi.rows() != psi.cols()) {
    throw ConfigError("standard_errors: psi must be square");
  }
  if (n == 0 || k == 0 || m == 0) {
    throw ConfigError("standard_errors: n, k, m must be >= 1");
  }
  const double nn = static_cast<double>(n);
  const double inflation = 1.0 + nn / (static_cast<double>(k) * static_cast<double>(m));
  Eigen::VectorXd se(psi.rows());
  for (Eigen::Index j = 0; j < psi.rows(); ++j) {
    const double v = psi(j, j);
    if (v < 0.0) {
      throw NumericalError("standard_errors: negative variance estimate");
    }
    se[j] = std::sqrt(inflation * v / nn);
  }
  return se;
}

WaldResult wald_intervals(const Eigen::VectorXd& beta_active, const Eigen::VectorXd& se,
                          double level) {
  if (beta_active.size() != se.size()) {
    throw ConfigError("wald_intervals: estimate and SE sizes differ");
  }
  if (!(level > 0.0) || !(level < 1.0)) {
    throw ConfigError("wald_intervals: level must lie in (0, 1)");
  }
  const double z = normal_quantile(0.5 * (1.0 + level));
  WaldResult w;
  w.ci_low.resize(se.size());
  w.ci_high.resize(se.size());
  w.p_value.resize(se.size());
  w.degenerate.assign(static_cast<std::size_t>(se.size()), false);
  for (Eigen::Index j = 0; j < se.size(); ++j) {
    w.ci_low[j] = beta_active[j] - z * se[j];
    w.ci_high[j] = beta_active[j] + z * se[j];
    if (se[j] == 0.0) {
      w.degenerate[static_cast<std::size_t>(j)] = true;
      w.p_value[j] = beta_active[j] == 0.0 ? 1.0 : 0.0;
    } else {
      w.p_value[j] = std::erfc(std::abs(beta_active[j]) / se[j] / std::sqrt(2.0));
    }
  }
  return w;
}

InferenceReport build_inference(std::span<const SubsampleSummary> summaries,
                                const Eigen::VectorXd& estimates_full,
                                std::span<const Eigen::Index> active, std::uint64_t n,
                                double level) {
  InferenceReport rep;
  rep.active_set.assign(active.begin(), active.end());
  rep.psi_hat = variance_estimator(summaries, active);
  rep.se = standard_errors(rep.psi_hat, n, summaries[0].k, summaries.size());
  rep.estimate.resize(static_cast<Eigen::Index>(active.size()));
  for (std::size_t j = 0; j < active.size(); ++j) {
    if (active[j] < 0 || active[j] >= estimates_full.size()) {
      throw ConfigError("build_inference: active index out of range");
    }
    rep.estimate[static_cast<Eigen::Index>(j)] = estimates_full[active[j]];
  }
  WaldResult w = wald_intervals(rep.estimate, rep.se, level);
  rep.ci_low = std::move(w.ci_low);
  rep.ci_high = std::move(w.ci_high);
  rep.p_value = std::move(w.p_value);
  rep.degenerate = std::move(w.degenerate);
  rep.inflation =
      1.0 + static_cast<double>(n) /
                (static_cast<double>(summaries[0].k) * static_cast<double>(summaries.size()));
  rep.level = level;
  return rep;
}

}  // namespace subbag
