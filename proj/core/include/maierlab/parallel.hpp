#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace maierlab {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs body(begin, end) over a fixed chunking of [0, n). The chunk
/// boundaries depend only on n and the resolved thread count is irrelevant
/// to the result as long as chunks write to disjoint state; reductions done
/// by the caller must be order-fixed (we hand back chunks in index order).
template <typename Body>
void parallel_chunks(std::int64_t n, int threads, Body&& body) {
  int nt = resolve_threads(threads);
  if (n <= 0) return;
  // Fixed chunk granularity independent of nt keeps per-chunk results
  // identical for any thread count.
  std::int64_t chunk = (n + 255) / 256;
  if (chunk < 1) chunk = 1;
  std::int64_t nchunks = (n + chunk - 1) / chunk;
  if (nt == 1 || nchunks == 1) {
    for (std::int64_t c = 0; c < nchunks; ++c)
      body(c, c * chunk, std::min(n, (c + 1) * chunk));
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(nt));
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::int64_t c = next.fetch_add(1);
        if (c >= nchunks) break;
        body(c, c * chunk, std::min(n, (c + 1) * chunk));
      }
    });
  }
  for (auto& th : pool) th.join();
}

/// Order-fixed parallel sum of f(i) over [0, n) with exact integer terms.
template <typename T, typename F>
T parallel_sum(std::int64_t n, int threads, F&& f) {
  if (n <= 0) return T{};
  std::int64_t chunk = (n + 255) / 256;
  std::int64_t nchunks = (n + chunk - 1) / chunk;
  std::vector<T> partial(static_cast<size_t>(nchunks), T{});
  parallel_chunks(n, threads, [&](std::int64_t c, std::int64_t b, std::int64_t e) {
    T acc{};
    for (std::int64_t i = b; i < e; ++i) acc += f(i);
    partial[static_cast<size_t>(c)] = acc;
  });
  T total{};
  for (const T& v : partial) total += v;
  return total;
}

}  // namespace maierlab
