#pragma once

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace markovcopula {

// Worker-count resolution for batch operations. MARKOV_COPULA_THREADS caps
// the number of workers; 0, unset, or unparsable means "auto" (the hardware
// concurrency). The count is further capped by the number of tasks.

namespace parallel_detail {

inline std::size_t env_thread_cap() {
  const char* raw = std::getenv("MARKOV_COPULA_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  const unsigned long value = std::strtoul(raw, &end, 10);
  if (end == raw || *end != '\0') return 0;  // not a number: auto
  return static_cast<std::size_t>(value);
}

}  // namespace parallel_detail

inline std::size_t resolve_thread_count(std::size_t n_tasks) {
  if (n_tasks == 0) return 1;
  std::size_t n = parallel_detail::env_thread_cap();
  if (n == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    n = hw == 0 ? 1 : static_cast<std::size_t>(hw);
  }
  if (n > n_tasks) n = n_tasks;
  return n == 0 ? 1 : n;
}

// Runs work(0), ..., work(n_tasks - 1) across the resolved worker count.
// Tasks must be independent; any exception is rethrown on the calling thread
// after all workers finish. With one worker the tasks run inline, in order.
inline void parallel_tasks(std::size_t n_tasks, const std::function<void(std::size_t)>& work) {
  const std::size_t n_threads = resolve_thread_count(n_tasks);
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) work(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto body = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_tasks) return;
      try {
        work(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) workers.emplace_back(body);
  for (std::thread& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace markovcopula
