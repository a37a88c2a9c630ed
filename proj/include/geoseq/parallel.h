//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GEOSEQ_PARALLEL_H_
#define GEOSEQ_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace geoseq {

/// Evaluates f(0), ..., f(n - 1) on up to `workers` threads. Results are
/// returned in index order. The first exception (by index) is rethrown after
/// all workers finished.
template <class F>
auto parallel_map(std::size_t n, int workers, F &&f)
    -> std::vector<std::invoke_result_t<F &, std::size_t>> {
  using R = std::invoke_result_t<F &, std::size_t>;
  std::vector<R> out(n);
  const std::size_t threads =
      std::min<std::size_t>(std::max(workers, 1), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      out[i] = f(i);
    return out;
  }

  std::atomic<std::size_t> next { 0 };
  std::mutex error_mutex;
  std::size_t error_index = n;
  std::exception_ptr error;

  auto work = [&]() {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t)
    pool.emplace_back(work);
  work();
  for (auto &t: pool)
    t.join();
  if (error)
    std::rethrow_exception(error);
  return out;
}

}  // namespace geoseq

#endif  // GEOSEQ_PARALLEL_H_
