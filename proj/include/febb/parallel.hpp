#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace febb {

/// Worker count: FEBB_THREADS when it holds a positive integer (at most 256),
/// otherwise the hardware concurrency.
unsigned worker_count();

/// Evaluates fn(i) for i in [0, n) on up to worker_count() threads and returns
/// the results in index order. The first exception thrown (lowest index) is
/// rethrown after all workers finish.
template <typename Fn>
auto parallel_map(std::size_t n, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> out(n);
  std::vector<std::exception_ptr> errors(n);
  const unsigned workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace febb
