#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wavebound {

struct ExecutionOptions {
  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 1;

  [[nodiscard]] unsigned resolved() const {
    if (threads != 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
  }
};

/// Calls body(i) for i in [0, n). Work is handed out by an atomic counter,
/// so body must write only to slots owned by i; results are then
/// independent of the thread count.
template <class Body>
void parallel_for(std::size_t n, const ExecutionOptions& exec, const Body& body) {
  const unsigned nt = std::min<std::size_t>(exec.resolved(), std::max<std::size_t>(n, 1));
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = n;
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nt - 1);
  for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace wavebound
