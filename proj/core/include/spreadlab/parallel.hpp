#pragma once

#include <cstddef>
#include <functional>

namespace spreadlab {

/// Worker budget: hardware concurrency, capped by the SPREADLAB_THREADS
/// environment variable when it is set to a positive integer. At least 1.
unsigned worker_count();

/// Runs `body(begin, end)` over disjoint contiguous chunks of [0, n),
/// possibly on several threads. Callers must make their per-index outputs
/// independent of the chunking (write per-index slots, or reduce with
/// order-free integer operations); worker count must never change results.
///
/// Runs inline when n < min_items_for_parallel: thread spawn costs tens of
/// microseconds, so callers pass a threshold reflecting their per-item work.
void parallel_ranges(std::size_t n,
                     const std::function<void(std::size_t, std::size_t)>& body,
                     std::size_t min_items_for_parallel = 2);

/// Item-count threshold putting total estimated work near ~20k units
/// before threads spawn (unit ≈ one edge draw or BFS visit).
constexpr std::size_t parallel_threshold(std::size_t per_item_work) {
  const std::size_t items = std::size_t{20000} / (per_item_work + 1);
  return items < 4 ? 4 : items;
}

}  // namespace spreadlab
