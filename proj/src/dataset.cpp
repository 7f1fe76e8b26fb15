#include "subbag/dataset.hpp"

#include <utility>

#include "subbag/error.hpp"

namespace subbag {

void validate_binary_response(const Eigen::Ref<const Eigen::VectorXd>& y) {
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] != 0.0 && y[i] != 1.0) {
      throw DataError("logistic response must be 0 or 1, got " + std::to_string(y[i]) +
                      " at row " + std::to_string(i));
    }
  }
}

InMemoryDataset::InMemoryDataset(Eigen::VectorXd y, Eigen::MatrixXd x, Family family,
                                 std::vector<std::string> names)
    : y_(std::move(y)), x_(std::move(x)), names_(std::move(names)) {
  if (y_.size() != x_.rows()) {
    throw DataError("dataset: response and covariate row counts differ");
  }
  if (!y_.allFinite() || !x_.allFinite()) {
    throw DataError("dataset: non-finite entry");
  }
  if (family == Family::Logistic) {
    validate_binary_response(y_);
  }
  if (names_.empty()) {
    names_.reserve(static_cast<std::size_t>(x_.cols()));
    for (Eigen::Index j = 0; j < x_.cols(); ++j) {
      names_.push_back("x" + std::to_string(j + 1));
    }
  } else if (names_.size() != static_cast<std::size_t>(x_.cols())) {
    throw DataError("dataset: covariate name count differs from column count");
  }
}

void InMemoryDataset::gather(std::span<const std::uint64_t> indices,
                             Eigen::Ref<Eigen::VectorXd> y,
                             Eigen::Ref<Eigen::MatrixXd> x) const {
  const auto n = static_cast<Eigen::Index>(indices.size());
  if (y.size() != n || x.rows() != n || x.cols() != x_.cols()) {
    throw DataError("gather: output shape mismatch");
  }
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto i = indices[static_cast<std::size_t>(r)];
    if (i >= rows()) {
      throw DataError("gather: row index out of range");
    }
    y[r] = y_[static_cast<Eigen::Index>(i)];
    x.row(r) = x_.row(static_cast<Eigen::Index>(i));
  }
}

}  // namespace subbag
