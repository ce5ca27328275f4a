#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace maxshape {

/// Runs body(chunk_index, begin, end) over [0, n) split into a fixed number of
/// chunks. The chunk decomposition does not depend on the thread count, so
/// per-chunk results can be merged in chunk order to keep output deterministic.
inline void parallel_chunks(std::size_t n, int threads,
                            const std::function<void(std::size_t, std::size_t, std::size_t)>& body,
                            std::size_t n_chunks = 64) {
  if (n == 0) return;
  if (n_chunks > n) n_chunks = n;
  auto chunk_range = [&](std::size_t c) {
    std::size_t lo = c * n / n_chunks;
    std::size_t hi = (c + 1) * n / n_chunks;
    return std::pair<std::size_t, std::size_t>(lo, hi);
  };
  if (threads <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) {
      auto [lo, hi] = chunk_range(c);
      body(c, lo, hi);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) break;
      auto [lo, hi] = chunk_range(c);
      body(c, lo, hi);
    }
  };
  std::vector<std::thread> pool;
  int nt = std::min<int>(threads, static_cast<int>(n_chunks));
  pool.reserve(nt);
  for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace maxshape
