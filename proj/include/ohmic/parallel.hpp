#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <cstddef>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace ohmic {

/// Worker count: hardware concurrency, capped by OHMIC_PROBE_THREADS if set.
inline unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("OHMIC_PROBE_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return n;
}

/// Evaluates fn(i) for i in [0, n) and stores results by index, so the output
/// is independent of scheduling. fn must not throw; callers capture per-item
/// errors in the result type.
template <typename Fn>
auto parallel_map(std::size_t n, Fn&& fn, unsigned workers = worker_count())
    -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<R> out(n);
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) out[i] = fn(i);
      });
    }
  }  // joins
  return out;
}

}  // namespace ohmic
