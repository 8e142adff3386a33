#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace spinbound {

/// Number of worker threads used when a caller passes 0.
inline unsigned default_thread_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs fn(task) for task in [0, n_tasks) and returns the results in task
/// order. Tasks are claimed dynamically, so results must depend only on the
/// task index (derive per-task seeds from it) for the output to be independent
/// of `threads`.
template <typename Result, typename Fn>
std::vector<Result> parallel_map(std::size_t n_tasks, unsigned threads, Fn&& fn) {
  std::vector<Result> out(n_tasks);
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n_tasks, 1)));
  if (threads <= 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) out[t] = fn(t);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t t = next++; t < n_tasks; t = next++) {
        try {
          out[t] = fn(t);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace spinbound
