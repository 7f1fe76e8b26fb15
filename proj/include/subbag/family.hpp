#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace subbag {

enum class Family : std::uint8_t { Linear = 0, Logistic = 1 };

const char* family_name(Family family);

struct Observation {
  double y = 0.0;
  Eigen::VectorXd x;
};

// Overflow-safe 1 / (1 + exp(-t)).
double sigmoid(double t);

// Per-observation loss and its derivatives in beta.
//
// Linear: squared error (y - x'b)^2, no 1/2 factor, so the Hessian is 2xx'.
// Logistic: negative Bernoulli log-likelihood
//     -(y t - log(1 + e^t)),  t = x'b,
// evaluated as log(1 + exp(-|t|)) + max(t, 0) - y t so it stays finite for
// any |t|. Gradient (sigmoid(t) - y) x, Hessian sigmoid(t)(1 - sigmoid(t)) xx'.
double loss(Family family, const Eigen::VectorXd& beta, const Observation& z);
Eigen::VectorXd gradient(Family family, const Eigen::VectorXd& beta, const Observation& z);
Eigen::MatrixXd hessian(Family family, const Eigen::VectorXd& beta, const Observation& z);

// Batched sums over the rows of (y, X); callers divide by the row count.
// hess_out accumulates through a self-adjoint rank update, so it is symmetric
// to the last bit. Both functions add into the outputs, which must be sized
// and zeroed (or partially accumulated) by the caller.
double loss_sum(Family family, const Eigen::VectorXd& beta,
                const Eigen::Ref<const Eigen::VectorXd>& y,
                const Eigen::Ref<const Eigen::MatrixXd>& x);
void add_grad_hess_sum(Family family, const Eigen::VectorXd& beta,
                       const Eigen::Ref<const Eigen::VectorXd>& y,
                       const Eigen::Ref<const Eigen::MatrixXd>& x,
                       Eigen::VectorXd& grad_out, Eigen::MatrixXd& hess_lower_out);

}  // namespace subbag
