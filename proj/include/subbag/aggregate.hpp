#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>

#include "subbag/engine.hpp"

namespace subbag {

// The pooled quadratic surrogate built from subsample summaries. With
// H_s = hessian and b_tilde_s = beta_tilde of subsample s,
//
//   Ltilde(beta) = (1/m) sum_s (beta - b_tilde_s)' H_s (beta - b_tilde_s)
//                = beta' h_bar beta - 2 b' beta + c,
//
//   h_bar = (1/m) sum_s H_s,   b = (1/m) sum_s H_s b_tilde_s,
//   c     = (1/m) sum_s b_tilde_s' H_s b_tilde_s.
//
// beta_bar is the plain mean of the beta_tilde_s and c_loss the mean of the
// subsample losses at their optima; both ride along for the weight and
// reporting stages.
struct AggregatedQuadratic {
  std::uint64_t m = 0;
  std::uint64_t k = 0;
  Eigen::MatrixXd h_bar;
  Eigen::VectorXd b;
  double c = 0.0;
  Eigen::VectorXd beta_bar;
  double c_loss = 0.0;
};

// Pools a non-empty span of summaries; all must share k and dimension.
AggregatedQuadratic merge(std::span<const SubsampleSummary> summaries);

// Pools two partial aggregates (weighted by their m); associative with
// merge() over the concatenated spans up to roundoff.
AggregatedQuadratic merge_pair(const AggregatedQuadratic& lhs, const AggregatedQuadratic& rhs);

double subbagging_loss(const AggregatedQuadratic& agg, const Eigen::VectorXd& beta);

// Gradient of the pooled quadratic: 2 (h_bar beta - b).
Eigen::VectorXd subbagging_loss_gradient(const AggregatedQuadratic& agg,
                                         const Eigen::VectorXd& beta);

// Adaptive penalty weights w_j = 1 / |beta_bar_j|^gamma. A digitally zero
// beta_bar_j maps to +infinity, which the solver treats as "force this
// coefficient to zero". A coordinate named by `unpenalized` (the intercept)
// gets weight 0.
Eigen::VectorXd adaptive_weights(const Eigen::VectorXd& beta_bar, double gamma,
                                 std::optional<Eigen::Index> unpenalized = std::nullopt);

}  // namespace subbag
