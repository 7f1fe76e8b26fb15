#include "subbag/family.hpp"

#include <cmath>
#include <stdexcept>

namespace subbag {

const char* family_name(Family family) {
  return family == Family::Linear ? "linear" : "logistic";
}

double sigmoid(double t) {
  if (t >= 0.0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  double e = std::exp(t);
  return e / (1.0 + e);
}

namespace {

void check_observation(const Eigen::VectorXd& beta, const Observation& z) {
  if (beta.size() != z.x.size()) {
    throw std::invalid_argument("loss: beta and x dimensions differ");
  }
  if (!beta.allFinite() || !z.x.allFinite() || !std::isfinite(z.y)) {
    throw std::invalid_argument("loss: non-finite input");
  }
}

}  // namespace

double loss(Family family, const Eigen::VectorXd& beta, const Observation& z) {
  check_observation(beta, z);
  double t = beta.dot(z.x);
  if (family == Family::Linear) {
    double r = z.y - t;
    return r * r;
  }
  return std::log1p(std::exp(-std::abs(t))) + std::max(t, 0.0) - z.y * t;
}

Eigen::VectorXd gradient(Family family, const Eigen::VectorXd& beta, const Observation& z) {
  check_observation(beta, z);
  double t = beta.dot(z.x);
  if (family == Family::Linear) {
    return -2.0 * (z.y - t) * z.x;
  }
  return (sigmoid(t) - z.y) * z.x;
}

Eigen::MatrixXd hessian(Family family, const Eigen::VectorXd& beta, const Observation& z) {
  check_observation(beta, z);
  if (family == Family::Linear) {
    return 2.0 * z.x * z.x.transpose();
  }
  double s = sigmoid(beta.dot(z.x));
  return (s * (1.0 - s)) * z.x * z.x.transpose();
}

double loss_sum(Family family, const Eigen::VectorXd& beta,
                const Eigen::Ref<const Eigen::VectorXd>& y,
                const Eigen::Ref<const Eigen::MatrixXd>& x) {
  if (x.cols() != beta.size() || x.rows() != y.size()) {
    throw std::invalid_argument("loss_sum: dimension mismatch");
  }
  if (family == Family::Linear) {
    return (y - x * beta).squaredNorm();
  }
  Eigen::ArrayXd t = (x * beta).array();
  return ((-t.abs()).exp().log1p() + t.max(0.0) - y.array() * t).sum();
}

void add_grad_hess_sum(Family family, const Eigen::VectorXd& beta,
                       const Eigen::Ref<const Eigen::VectorXd>& y,
                       const Eigen::Ref<const Eigen::MatrixXd>& x,
                       Eigen::VectorXd& grad_out, Eigen::MatrixXd& hess_lower_out) {
  if (x.cols() != beta.size() || x.rows() != y.size()) {
    throw std::invalid_argument("add_grad_hess_sum: dimension mismatch");
  }
  if (grad_out.size() != beta.size() ||
      hess_lower_out.rows() != beta.size() || hess_lower_out.cols() != beta.size()) {
    throw std::invalid_argument("add_grad_hess_sum: output size mismatch");
  }
  if (family == Family::Linear) {
    grad_out.noalias() += -2.0 * x.transpose() * (y - x * beta);
    hess_lower_out.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), 2.0);
    return;
  }
  Eigen::ArrayXd t = (x * beta).array();
  Eigen::ArrayXd s = (1.0 + (-t).exp()).inverse();
  grad_out.noalias() += x.transpose() * (s - y.array()).matrix();
  Eigen::MatrixXd xw = x.array().colwise() * (s * (1.0 - s)).sqrt();
  hess_lower_out.selfadjointView<Eigen::Lower>().rankUpdate(xw.transpose(), 1.0);
}

}  // namespace subbag
