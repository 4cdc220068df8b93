#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace raywave {

// Global worker count; set once from the CLI before launching work.
inline int& thread_count() {
  static int n = static_cast<int>(std::thread::hardware_concurrency());
  return n;
}

// Deterministic chunked parallel loop: index i is always processed by chunk
// i*T/n regardless of scheduling, and chunks write to disjoint outputs, so
// results are independent of thread timing.
template <class F>
void parallel_for(std::size_t n, F&& body) {
  const int requested = thread_count();
  const std::size_t t =
      requested > 0 ? static_cast<std::size_t>(requested) : 1;
  if (t <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t workers = t < n ? t : n;
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex guard;
  auto run = [&](std::size_t w) {
    const std::size_t lo = n * w / workers;
    const std::size_t hi = n * (w + 1) / workers;
    try {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!first_error) first_error = std::current_exception();
    }
  };
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace raywave
