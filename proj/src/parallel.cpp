#include "subbag/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace subbag {

void parallel_for_index(std::uint64_t n, int threads,
                        const std::function<void(std::uint64_t)>& fn) {
  if (n == 0) return;
  if (threads < 1) threads = 1;
  std::uint64_t workers = std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), n);

  if (workers == 1) {
    for (std::uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
        stop.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace subbag
