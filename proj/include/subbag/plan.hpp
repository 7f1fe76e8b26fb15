#pragma once

#include <cstdint>
#include <optional>

namespace subbag {

// Subsampling design: m subsamples of k distinct rows each, drawn from N rows.
// When sized by rates, k = floor(N^(1/2 + delta)) and m = floor(alpha N / k).
struct SubbaggingPlan {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  std::uint64_t m = 0;
  std::optional<double> delta;
  std::optional<double> alpha;
  std::uint64_t master_seed = 0;
};

// k from the growth rate; requires 0 < delta < 1/2 so that k = o(N).
std::uint64_t derive_k(std::uint64_t n, double delta);

// m from the sampling fraction; requires alpha > 0 and floor(alpha N / k) >= 1.
std::uint64_t derive_m(std::uint64_t n, std::uint64_t k, double alpha);

// Throws ConfigError unless 1 <= k <= n and m >= 1.
void validate_plan(const SubbaggingPlan& plan);

SubbaggingPlan make_plan(std::uint64_t n, double delta, double alpha, std::uint64_t master_seed);

}  // namespace subbag
