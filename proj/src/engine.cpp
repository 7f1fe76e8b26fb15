#include "subbag/engine.hpp"

#include <algorithm>
#include <mutex>
#include <optional>
#include <utility>

#include "subbag/error.hpp"
#include "subbag/parallel.hpp"
#include "subbag/rng.hpp"
#include "subbag/sampling.hpp"

namespace subbag {

SubsampleSummary fit_subsample(const Dataset& data, std::span<const std::uint64_t> indices,
                               Family family, const Eigen::VectorXd& init,
                               const NewtonOptions& opts, std::uint32_t subsample_id,
                               std::uint64_t seed) {
  NewtonResult fit = newton_fit(data, family, RowSelection::of(indices), init, opts);
  SubsampleSummary s;
  s.k = indices.size();
  s.subsample_id = subsample_id;
  s.seed = seed;
  s.loss_at_opt = fit.loss;
  s.beta_tilde = std::move(fit.beta);
  s.hessian = std::move(fit.hessian);
  return s;
}

PlanRun run_plan(const Dataset& data, const SubbaggingPlan& plan, Family family,
                 const EngineOptions& opts) {
  validate_plan(plan);
  if (plan.n != data.rows()) {
    throw ConfigError("run_plan: plan sized for n=" + std::to_string(plan.n) +
                      " but dataset has " + std::to_string(data.rows()) + " rows");
  }

  const Eigen::VectorXd init = Eigen::VectorXd::Zero(data.cols());
  std::vector<std::optional<SubsampleSummary>> slots(plan.m);
  std::vector<FitFailure> failures;
  std::mutex failures_mutex;
  const bool skip = opts.policy == FitPolicy::SkipAndReport;

  auto fit_one = [&](std::uint64_t s) {
    const auto id = static_cast<std::uint32_t>(s);
    const std::uint64_t seed = mix_seed(plan.master_seed, s);
    std::vector<std::uint64_t> idx = draw_subsample(plan.n, plan.k, seed);
    try {
      slots[s] = fit_subsample(data, idx, family, init, opts.newton, id, seed);
    } catch (const NumericalError& e) {
      if (!skip) {
        throw NumericalError("subsample " + std::to_string(id) + ": " + e.what());
      }
      std::lock_guard<std::mutex> lock(failures_mutex);
      failures.push_back({id, e.what()});
    }
  };

  parallel_for_index(plan.m, opts.threads, fit_one);

  PlanRun run;
  run.summaries.reserve(plan.m);
  for (auto& slot : slots) {
    if (slot) run.summaries.push_back(std::move(*slot));
  }
  std::sort(failures.begin(), failures.end(),
            [](const FitFailure& a, const FitFailure& b) { return a.subsample_id < b.subsample_id; });
  run.failures = std::move(failures);
  return run;
}

}  // namespace subbag
