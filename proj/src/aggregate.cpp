#include "subbag/aggregate.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "subbag/error.hpp"

namespace subbag {

AggregatedQuadratic merge(std::span<const SubsampleSummary> summaries) {
  if (summaries.empty()) {
    throw ConfigError("merge: no summaries");
  }
  const Eigen::Index p = summaries[0].beta_tilde.size();
  const std::uint64_t k = summaries[0].k;

  AggregatedQuadratic agg;
  agg.m = summaries.size();
  agg.k = k;
  agg.h_bar = Eigen::MatrixXd::Zero(p, p);
  agg.b = Eigen::VectorXd::Zero(p);
  agg.beta_bar = Eigen::VectorXd::Zero(p);

  for (const auto& s : summaries) {
    if (s.beta_tilde.size() != p || s.hessian.rows() != p || s.hessian.cols() != p) {
      throw ConfigError("merge: summary dimension mismatch");
    }
    if (s.k != k) {
      throw ConfigError("merge: summaries disagree on k (" + std::to_string(s.k) + " vs " +
                        std::to_string(k) + ")");
    }
    Eigen::VectorXd hb = s.hessian * s.beta_tilde;
    agg.h_bar += s.hessian;
    agg.b += hb;
    agg.c += s.beta_tilde.dot(hb);
    agg.beta_bar += s.beta_tilde;
    agg.c_loss += s.loss_at_opt;
  }

  const double inv_m = 1.0 / static_cast<double>(agg.m);
  agg.h_bar *= inv_m;
  agg.b *= inv_m;
  agg.c *= inv_m;
  agg.beta_bar *= inv_m;
  agg.c_loss *= inv_m;
  return agg;
}

AggregatedQuadratic merge_pair(const AggregatedQuadratic& lhs, const AggregatedQuadratic& rhs) {
  if (lhs.m == 0) return rhs;
  if (rhs.m == 0) return lhs;
  if (lhs.b.size() != rhs.b.size()) {
    throw ConfigError("merge_pair: dimension mismatch");
  }
  if (lhs.k != rhs.k) {
    throw ConfigError("merge_pair: aggregates disagree on k");
  }
  const double wl = static_cast<double>(lhs.m);
  const double wr = static_cast<double>(rhs.m);
  const double inv = 1.0 / (wl + wr);

  AggregatedQuadratic agg;
  agg.m = lhs.m + rhs.m;
  agg.k = lhs.k;
  agg.h_bar = (wl * lhs.h_bar + wr * rhs.h_bar) * inv;
  agg.b = (wl * lhs.b + wr * rhs.b) * inv;
  agg.c = (wl * lhs.c + wr * rhs.c) * inv;
  agg.beta_bar = (wl * lhs.beta_bar + wr * rhs.beta_bar) * inv;
  agg.c_loss = (wl * lhs.c_loss + wr * rhs.c_loss) * inv;
  return agg;
}

double subbagging_loss(const AggregatedQuadratic& agg, const Eigen::VectorXd& beta) {
  if (beta.size() != agg.b.size()) {
    throw ConfigError("subbagging_loss: dimension mismatch");
  }
  return beta.dot(agg.h_bar * beta) - 2.0 * agg.b.dot(beta) + agg.c;
}

Eigen::VectorXd subbagging_loss_gradient(const AggregatedQuadratic& agg,
                                         const Eigen::VectorXd& beta) {
  if (beta.size() != agg.b.size()) {
    throw ConfigError("subbagging_loss_gradient: dimension mismatch");
  }
  return 2.0 * (agg.h_bar * beta - agg.b);
}

Eigen::VectorXd adaptive_weights(const Eigen::VectorXd& beta_bar, double gamma,
                                 std::optional<Eigen::Index> unpenalized) {
  if (!(gamma > 0.0)) {
    throw ConfigError("adaptive_weights: gamma must be positive");
  }
  Eigen::VectorXd w(beta_bar.size());
  for (Eigen::Index j = 0; j < beta_bar.size(); ++j) {
    const double a = std::abs(beta_bar[j]);
    w[j] = a == 0.0 ? std::numeric_limits<double>::infinity() : std::pow(a, -gamma);
  }
  if (unpenalized) {
    if (*unpenalized < 0 || *unpenalized >= w.size()) {
      throw ConfigError("adaptive_weights: unpenalized index out of range");
    }
    w[*unpenalized] = 0.0;
  }
  return w;
}

}  // namespace subbag
