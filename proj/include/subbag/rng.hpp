#pragma once

#include <cstdint>

namespace subbag {

// Derives an independent child seed from (master, id) with the splitmix64
// finalizer. Subsample s of a run gets mix_seed(master_seed, s), so results
// do not depend on which thread handles which subsample.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t id) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (id + 1);
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace subbag
