#include "phasespace/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace phasespace {
namespace {

std::atomic<std::size_t> g_override{0};

std::size_t default_workers() {
  if (const char* env = std::getenv("PHASESPACE_WORKERS"); env != nullptr && *env != '\0') {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      // fall through to hardware default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace

std::size_t worker_count() {
  const std::size_t forced = g_override.load(std::memory_order_relaxed);
  if (forced != 0) return forced;
  static const std::size_t resolved = default_workers();
  return resolved;
}

void set_worker_count(std::size_t workers) { g_override.store(workers, std::memory_order_relaxed); }

}  // namespace phasespace
