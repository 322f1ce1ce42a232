#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace eal {

// Runs fn(i) for i in [0, n).  Work is striped across workers by index so the
// assignment of tasks to threads is fixed; combined with per-task RNG streams
// and preallocated result slots this keeps output independent of the degree.
inline void parallel_for(size_t n, int degree, const std::function<void(size_t)>& fn) {
  if (degree <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const size_t workers = std::min<size_t>(static_cast<size_t>(degree), n);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline int effective_parallelism(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace eal
