#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace qlear {

/// Resolves a requested worker count; 0 means one per hardware thread.
inline std::size_t resolve_workers(std::size_t requested) {
  if (requested != 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, n) on up to `workers` threads.
///
/// Callers write results into pre-sized slots indexed by i, so output never
/// depends on scheduling. If several iterations throw, the exception from the
/// lowest index is rethrown after all threads join.
template <class Body>
void parallel_for(std::size_t n, std::size_t workers, Body&& body) {
  workers = std::min(resolve_workers(workers), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto run = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();

  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace qlear
