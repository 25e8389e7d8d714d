#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace rmlt {

inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Splits [0, count) into contiguous chunks, one per worker, and runs
/// fn(begin, end, worker_index) on each. Chunk boundaries depend only on
/// count and the worker count, so per-chunk results merge deterministically.
template <typename Fn>
void parallel_chunks(std::size_t count, unsigned workers, Fn&& fn) {
  workers = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    fn(std::size_t{0}, count, 0u);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([&, begin, end, w] {
      try {
        fn(begin, end, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace rmlt
