#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace phasespace {

/// Number of worker threads used for row-parallel loops. Resolved from
/// PHASESPACE_WORKERS on first use unless overridden.
std::size_t worker_count();

/// Override the worker count; 0 restores the environment/hardware default.
void set_worker_count(std::size_t workers);

namespace detail {
inline thread_local bool inside_parallel_region = false;
}

/// Runs body(i) for i in [0, count). Each index is processed exactly once
/// and independently, so results never depend on the worker count.
/// Nested calls from inside a worker run serially.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  const std::size_t workers = detail::inside_parallel_region ? 1 : std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      detail::inside_parallel_region = true;
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace phasespace
