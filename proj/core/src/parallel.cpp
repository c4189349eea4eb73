#include "spreadlab/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace spreadlab {

unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const char* env = std::getenv("SPREADLAB_THREADS");
  if (env != nullptr && *env != '\0') {
    unsigned cap = 0;
    auto res = std::from_chars(env, env + std::strlen(env), cap);
    if (res.ec == std::errc() && *res.ptr == '\0' && cap >= 1) {
      hw = std::min(hw, cap);
    }
  }
  return hw;
}

void parallel_ranges(std::size_t n,
                     const std::function<void(std::size_t, std::size_t)>& body,
                     std::size_t min_items_for_parallel) {
  if (n == 0) return;
  std::size_t workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1 || n < min_items_for_parallel) {
    body(0, n);
    return;
  }

  const std::size_t chunk = (n + workers - 1) / workers;
  std::exception_ptr first_error;
  std::mutex error_mutex;

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        body(lo, hi);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace spreadlab
