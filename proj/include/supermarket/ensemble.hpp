#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace supermarket {

// Runs fn(i) for i in [0, count) one after another.  Kept as the reference
// implementation: identical task decomposition to the parallel runner, so
// results must match bit for bit when fn is deterministic per index.
template <typename Fn>
void run_tasks_serial(std::size_t count, Fn&& fn) {
  for (std::size_t i = 0; i < count; ++i) fn(i);
}

// OpenMP variant.  Tasks are independent; each writes only to its own slot,
// so the only shared state is the exception table.  The first exception in
// index order is rethrown to keep failures deterministic.
template <typename Fn>
void run_tasks_parallel(std::size_t count, int workers, Fn&& fn) {
  if (count == 0) return;
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (workers == 1) {
    run_tasks_serial(count, fn);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (long long i = 0; i < static_cast<long long>(count); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
#else
  for (std::size_t i = 0; i < count; ++i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
#endif
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Worker-count resolution order: SUPERMARKET_WORKERS env var, then the
// explicit request (CLI flag or config), then hardware concurrency.
int resolve_workers(int requested);

}  // namespace supermarket
