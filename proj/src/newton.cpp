#include "subbag/newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "subbag/error.hpp"

namespace subbag {

namespace {

// Applies fn(y_chunk, x_chunk) to consecutive chunks of the selected rows.
template <typename Fn>
void for_each_chunk(const Dataset& data, const RowSelection& rows, Eigen::Index chunk_rows,
                    Fn&& fn) {
  const std::uint64_t total = rows.size();
  const auto chunk = static_cast<std::uint64_t>(std::max<Eigen::Index>(chunk_rows, 1));
  Eigen::VectorXd y(static_cast<Eigen::Index>(std::min<std::uint64_t>(chunk, total)));
  Eigen::MatrixXd x(y.size(), data.cols());
  std::vector<std::uint64_t> range_buf;
  if (rows.whole) range_buf.resize(static_cast<std::size_t>(std::min<std::uint64_t>(chunk, total)));

  for (std::uint64_t start = 0; start < total; start += chunk) {
    const auto len = static_cast<Eigen::Index>(std::min<std::uint64_t>(chunk, total - start));
    std::span<const std::uint64_t> idx;
    if (rows.whole) {
      std::iota(range_buf.begin(), range_buf.begin() + len, start);
      idx = std::span<const std::uint64_t>(range_buf.data(), static_cast<std::size_t>(len));
    } else {
      idx = rows.indices.subspan(static_cast<std::size_t>(start), static_cast<std::size_t>(len));
    }
    data.gather(idx, y.head(len), x.topRows(len));
    fn(y.head(len), x.topRows(len));
  }
}

}  // namespace

double average_loss(const Dataset& data, Family family, const RowSelection& rows,
                    const Eigen::VectorXd& beta, Eigen::Index chunk_rows) {
  const std::uint64_t n = rows.size();
  if (n == 0) throw NumericalError("average_loss: empty row selection");
  double sum = 0.0;
  for_each_chunk(data, rows, chunk_rows, [&](const auto& y, const auto& x) {
    sum += loss_sum(family, beta, y, x);
  });
  return sum / static_cast<double>(n);
}

void average_grad_hess(const Dataset& data, Family family, const RowSelection& rows,
                       const Eigen::VectorXd& beta, Eigen::VectorXd& grad,
                       Eigen::MatrixXd& hess, Eigen::Index chunk_rows) {
  const std::uint64_t n = rows.size();
  if (n == 0) throw NumericalError("average_grad_hess: empty row selection");
  grad.setZero(beta.size());
  hess.setZero(beta.size(), beta.size());
  for_each_chunk(data, rows, chunk_rows, [&](const auto& y, const auto& x) {
    add_grad_hess_sum(family, beta, y, x, grad, hess);
  });
  grad /= static_cast<double>(n);
  hess /= static_cast<double>(n);
  hess.triangularView<Eigen::StrictlyUpper>() = hess.transpose();
}

NewtonResult newton_fit(const Dataset& data, Family family, const RowSelection& rows,
                        const Eigen::VectorXd& init, const NewtonOptions& opts) {
  if (init.size() != data.cols()) {
    throw ConfigError("newton_fit: init size differs from covariate count");
  }
  const std::uint64_t n = rows.size();
  if (n == 0) throw NumericalError("newton_fit: empty row selection");

  NewtonResult res;
  res.beta = init;
  Eigen::VectorXd grad(init.size());
  Eigen::MatrixXd hess(init.size(), init.size());
  double cur_loss = average_loss(data, family, rows, res.beta, opts.chunk_rows);

  for (int iter = 0; iter <= opts.max_iter; ++iter) {
    average_grad_hess(data, family, rows, res.beta, grad, hess, opts.chunk_rows);
    res.grad_norm = grad.lpNorm<Eigen::Infinity>();
    if (res.grad_norm <= opts.tol) {
      res.hessian = std::move(hess);
      res.loss = cur_loss;
      res.iterations = iter;
      return res;
    }
    if (iter == opts.max_iter) break;

    Eigen::LLT<Eigen::MatrixXd> llt(hess);
    if (llt.info() != Eigen::Success) {
      throw NumericalError(std::string("newton_fit: Hessian not positive definite (") +
                           family_name(family) + ", n=" + std::to_string(n) +
                           "); subsample may be non-identifiable");
    }
    Eigen::VectorXd direction = llt.solve(grad);

    double step = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opts.max_halvings; ++h) {
      Eigen::VectorXd cand = res.beta - step * direction;
      double cand_loss = average_loss(data, family, rows, cand, opts.chunk_rows);
      if (cand_loss < cur_loss) {
        res.beta = std::move(cand);
        cur_loss = cand_loss;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // The achievable decrease is about half the Newton decrement. Once that
      // falls below the rounding floor of the n-term loss average, the fit is
      // as converged as the arithmetic allows.
      const double floor_tol = std::numeric_limits<double>::epsilon() *
                               (1.0 + std::abs(cur_loss)) *
                               std::sqrt(static_cast<double>(n));
      if (0.5 * grad.dot(direction) <= floor_tol) {
        res.hessian = std::move(hess);
        res.loss = cur_loss;
        res.iterations = iter + 1;
        return res;
      }
      throw NumericalError("newton_fit: line search failed after " +
                           std::to_string(opts.max_halvings) + " halvings (grad sup-norm " +
                           std::to_string(res.grad_norm) + ")");
    }
  }

  throw NumericalError("newton_fit: no convergence in " + std::to_string(opts.max_iter) +
                       " iterations (grad sup-norm " + std::to_string(res.grad_norm) + ")");
}

}  // namespace subbag
