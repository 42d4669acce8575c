#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace innerlab {

/// 0 means: INNERLAB_THREADS if set, else the hardware concurrency.
int resolve_threads(int requested);

/// Runs body(begin, end) over `count` contiguous chunks of [0, n) on up to
/// `threads` workers. Chunk boundaries depend only on n and count, so callers
/// that write per-chunk results get schedule-independent output. The first
/// exception thrown by a worker is rethrown.
template <class Body>
void parallel_chunks(std::size_t n, std::size_t count, int threads, Body&& body) {
  if (n == 0) return;
  count = std::max<std::size_t>(1, std::min(count, n));
  auto chunk_begin = [&](std::size_t c) { return n * c / count; };
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
  if (workers <= 1) {
    for (std::size_t c = 0; c < count; ++c) body(c, chunk_begin(c), chunk_begin(c + 1));
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t c = w; c < count; c += workers) body(c, chunk_begin(c), chunk_begin(c + 1));
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace innerlab
