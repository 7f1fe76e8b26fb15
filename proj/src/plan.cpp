#include "subbag/plan.hpp"

#include <cmath>
#include <string>

#include "subbag/error.hpp"

namespace subbag {

std::uint64_t derive_k(std::uint64_t n, double delta) {
  if (!(delta > 0.0) || !(delta < 0.5)) {
    throw ConfigError("delta must lie in (0, 1/2), got " + std::to_string(delta));
  }
  if (n == 0) {
    throw ConfigError("plan requires n >= 1");
  }
  double k = std::floor(std::pow(static_cast<double>(n), 0.5 + delta));
  if (k < 1.0) return 1;
  if (k > static_cast<double>(n)) return n;
  return static_cast<std::uint64_t>(k);
}

std::uint64_t derive_m(std::uint64_t n, std::uint64_t k, double alpha) {
  if (!(alpha > 0.0)) {
    throw ConfigError("alpha must be positive, got " + std::to_string(alpha));
  }
  if (k == 0) {
    throw ConfigError("plan requires k >= 1");
  }
  double m = std::floor(alpha * static_cast<double>(n) / static_cast<double>(k));
  if (m < 1.0) {
    throw ConfigError("alpha " + std::to_string(alpha) + " yields zero subsamples at n=" +
                      std::to_string(n) + ", k=" + std::to_string(k));
  }
  return static_cast<std::uint64_t>(m);
}

void validate_plan(const SubbaggingPlan& plan) {
  if (plan.n == 0) throw ConfigError("plan: n must be >= 1");
  if (plan.k == 0 || plan.k > plan.n) {
    throw ConfigError("plan: k must satisfy 1 <= k <= n (k=" + std::to_string(plan.k) +
                      ", n=" + std::to_string(plan.n) + ")");
  }
  if (plan.m == 0) throw ConfigError("plan: m must be >= 1");
}

SubbaggingPlan make_plan(std::uint64_t n, double delta, double alpha, std::uint64_t master_seed) {
  SubbaggingPlan plan;
  plan.n = n;
  plan.delta = delta;
  plan.alpha = alpha;
  plan.k = derive_k(n, delta);
  plan.m = derive_m(n, plan.k, alpha);
  plan.master_seed = master_seed;
  validate_plan(plan);
  return plan;
}

}  // namespace subbag
