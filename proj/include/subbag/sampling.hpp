#pragma once

#include <cstdint>
#include <vector>

namespace subbag {

// Draws k distinct row indices from {0, ..., n-1}, uniform over all k-subsets,
// using a partial Fisher-Yates shuffle over a sparse swap table (O(k) memory,
// so n can be huge). Deterministic in seed; returns the indices sorted.
std::vector<std::uint64_t> draw_subsample(std::uint64_t n, std::uint64_t k, std::uint64_t seed);

}  // namespace subbag
