#include "tflow/detail/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace tflow::detail {

namespace {
thread_local bool inside_worker = false;
}

int worker_count() {
  if (const char* env = std::getenv("TFLOW_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && parsed >= 1 && parsed <= 4096) {
      return static_cast<int>(parsed);
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for_blocks(std::int64_t n_blocks,
                         const std::function<void(std::int64_t)>& fn) {
  if (n_blocks <= 0) return;
  const int workers = inside_worker ? 1 : worker_count();
  if (workers == 1 || n_blocks == 1) {
    for (std::int64_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }

  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto body = [&] {
    inside_worker = true;
    while (!failed.load(std::memory_order_relaxed)) {
      const std::int64_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= n_blocks) break;
      try {
        fn(b);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        break;
      }
    }
    inside_worker = false;
  };

  const int n_threads =
      static_cast<int>(std::min<std::int64_t>(workers, n_blocks));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(n_threads) - 1);
  for (int t = 1; t < n_threads; ++t) threads.emplace_back(body);
  body();
  for (auto& thread : threads) thread.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace tflow::detail
