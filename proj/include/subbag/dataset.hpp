#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "subbag/family.hpp"

namespace subbag {

// Row-addressable regression table: response y plus p covariates per row.
// gather() is the only data access path; fits read their rows through it in
// fixed-size chunks, so the full table never has to be resident.
class Dataset {
 public:
  virtual ~Dataset() = default;

  virtual std::uint64_t rows() const = 0;
  virtual Eigen::Index cols() const = 0;
  virtual const std::vector<std::string>& covariate_names() const = 0;

  // Copies the requested rows: row r of the outputs is row indices[r] of the
  // table. Outputs must be pre-sized to indices.size() x cols(). Must be safe
  // to call concurrently.
  virtual void gather(std::span<const std::uint64_t> indices,
                      Eigen::Ref<Eigen::VectorXd> y,
                      Eigen::Ref<Eigen::MatrixXd> x) const = 0;
};

class InMemoryDataset final : public Dataset {
 public:
  // Throws DataError on size mismatch or non-finite entries; for Logistic,
  // every response must be exactly 0 or 1.
  InMemoryDataset(Eigen::VectorXd y, Eigen::MatrixXd x, Family family,
                  std::vector<std::string> names = {});

  std::uint64_t rows() const override { return static_cast<std::uint64_t>(y_.size()); }
  Eigen::Index cols() const override { return x_.cols(); }
  const std::vector<std::string>& covariate_names() const override { return names_; }
  void gather(std::span<const std::uint64_t> indices,
              Eigen::Ref<Eigen::VectorXd> y,
              Eigen::Ref<Eigen::MatrixXd> x) const override;

  const Eigen::VectorXd& y() const { return y_; }
  const Eigen::MatrixXd& x() const { return x_; }

 private:
  Eigen::VectorXd y_;
  Eigen::MatrixXd x_;
  std::vector<std::string> names_;
};

// Throws DataError unless every element of y is exactly 0 or 1.
void validate_binary_response(const Eigen::Ref<const Eigen::VectorXd>& y);

}  // namespace subbag
