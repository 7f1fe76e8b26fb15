#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>

#include "subbag/dataset.hpp"
#include "subbag/family.hpp"

namespace subbag {

struct NewtonOptions {
  double tol = 1e-8;  // sup-norm of the average-loss gradient at convergence
  int max_iter = 100;
  int max_halvings = 30;
  Eigen::Index chunk_rows = 8192;  // accumulation block size
};

struct NewtonResult {
  Eigen::VectorXd beta;
  Eigen::MatrixXd hessian;  // average Hessian at beta
  double loss = 0.0;        // average loss at beta
  int iterations = 0;
  double grad_norm = 0.0;
};

// Rows a fit runs over: an explicit index set, or all of [0, rows()).
struct RowSelection {
  std::span<const std::uint64_t> indices;
  std::uint64_t n_rows = 0;
  bool whole = false;

  std::uint64_t size() const { return whole ? n_rows : indices.size(); }
  static RowSelection of(std::span<const std::uint64_t> idx) { return {idx, 0, false}; }
  static RowSelection all(std::uint64_t n) { return {{}, n, true}; }
};

// Average loss / gradient / Hessian over the selected rows at beta. Rows are
// gathered and reduced in fixed chunks of chunk_rows, in selection order, so
// any two selections enumerating the same rows in the same order give
// bit-identical results (in particular, an explicit 0..N-1 index set matches
// the whole-dataset selection).
double average_loss(const Dataset& data, Family family, const RowSelection& rows,
                    const Eigen::VectorXd& beta, Eigen::Index chunk_rows = 8192);
void average_grad_hess(const Dataset& data, Family family, const RowSelection& rows,
                       const Eigen::VectorXd& beta, Eigen::VectorXd& grad,
                       Eigen::MatrixXd& hess, Eigen::Index chunk_rows = 8192);

// Damped Newton on the average loss over the selected rows: full step first,
// halved until the loss decreases. The Newton system is solved by Cholesky;
// a non-positive-definite Hessian, a failed line search, or hitting max_iter
// raises NumericalError. On return, hessian/loss/grad_norm are evaluated at
// the returned beta and grad_norm <= tol.
NewtonResult newton_fit(const Dataset& data, Family family, const RowSelection& rows,
                        const Eigen::VectorXd& init, const NewtonOptions& opts = {});

}  // namespace subbag
