#pragma once

#include <cstdint>
#include <functional>

namespace subbag {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each work item must
// write only to its own output slot; results then do not depend on the
// schedule. The first exception thrown by any item is rethrown after all
// workers have stopped.
void parallel_for_index(std::uint64_t n, int threads,
                        const std::function<void(std::uint64_t)>& fn);

}  // namespace subbag
