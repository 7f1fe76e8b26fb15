#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "subbag/dataset.hpp"
#include "subbag/newton.hpp"
#include "subbag/plan.hpp"

namespace subbag {

// Everything retained from one subsample fit: the optimizer, the average
// Hessian there, and the average loss there. Downstream stages never touch
// the rows again.
struct SubsampleSummary {
  std::uint64_t k = 0;
  std::uint32_t subsample_id = 0;
  std::uint64_t seed = 0;
  double loss_at_opt = 0.0;
  Eigen::VectorXd beta_tilde;
  Eigen::MatrixXd hessian;
};

enum class FitPolicy { FailFast, SkipAndReport };

struct FitFailure {
  std::uint32_t subsample_id = 0;
  std::string message;
};

struct EngineOptions {
  NewtonOptions newton;
  int threads = 1;
  FitPolicy policy = FitPolicy::FailFast;
};

SubsampleSummary fit_subsample(const Dataset& data, std::span<const std::uint64_t> indices,
                               Family family, const Eigen::VectorXd& init,
                               const NewtonOptions& opts = {}, std::uint32_t subsample_id = 0,
                               std::uint64_t seed = 0);

struct PlanRun {
  std::vector<SubsampleSummary> summaries;  // ordered by subsample_id
  std::vector<FitFailure> failures;         // only under SkipAndReport
};

// Draws and fits the plan's m subsamples from a zero start. Subsample s is
// seeded with mix_seed(plan.master_seed, s), so the result is identical for
// any thread count. Under FailFast the first failing subsample aborts the
// run; under SkipAndReport failures are collected and the rest proceed.
PlanRun run_plan(const Dataset& data, const SubbaggingPlan& plan, Family family,
                 const EngineOptions& opts = {});

}  // namespace subbag
