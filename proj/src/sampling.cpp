#include "subbag/sampling.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <unordered_map>

#include "subbag/error.hpp"

namespace subbag {

std::vector<std::uint64_t> draw_subsample(std::uint64_t n, std::uint64_t k, std::uint64_t seed) {
  if (k > n) {
    throw ConfigError("draw_subsample: k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
  }
  std::vector<std::uint64_t> out(k);
  if (k == 0) return out;

  std::mt19937_64 rng(seed);
  // swaps[i] holds the value currently sitting at virtual position i of the
  // identity permutation; untouched positions hold their own index.
  std::unordered_map<std::uint64_t, std::uint64_t> swaps;
  swaps.reserve(2 * static_cast<std::size_t>(k));
  auto at = [&swaps](std::uint64_t pos) {
    auto it = swaps.find(pos);
    return it == swaps.end() ? pos : it->second;
  };

  for (std::uint64_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::uint64_t> pick(i, n - 1);
    std::uint64_t j = pick(rng);
    std::uint64_t vi = at(i);
    std::uint64_t vj = at(j);
    out[i] = vj;
    swaps[j] = vi;
    swaps[i] = vj;  // never read again, kept for clarity
  }

  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace subbag
