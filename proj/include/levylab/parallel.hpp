#pragma once
// Deterministic data-parallel loop: static chunking, results written to
// caller-owned slots, so the output never depends on scheduling.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace levylab {

inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  int usable = std::max(1, threads);
  if (usable == 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  usable = static_cast<int>(std::min<std::size_t>(usable, n));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(usable);
  std::size_t chunk = (n + usable - 1) / usable;
  for (int t = 0; t < usable; ++t) {
    std::size_t lo = t * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi, t]() {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace levylab
