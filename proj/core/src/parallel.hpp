#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace dwork::detail {

// Runs body(i) for i in [0, n) on up to `workers` threads, contiguous blocks
// per thread. The first exception thrown by any block is rethrown.
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
  const std::size_t w = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (w <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(w);
  const std::size_t chunk = (n + w - 1) / w;
  for (std::size_t t = 0; t < w; ++t) {
    const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([&, t, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace dwork::detail
