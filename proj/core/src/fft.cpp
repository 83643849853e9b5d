#include "phasespace/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "phasespace/parallel.hpp"

namespace phasespace::fft {
namespace {

struct FftwFree {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using AlignedBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

AlignedBuffer allocate(std::size_t n) {
  auto* raw = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (raw == nullptr) throw std::bad_alloc();
  return AlignedBuffer(raw);
}

// fftw_plan_* is not thread-safe; fftw_execute_dft is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, Direction dir) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(n, dir);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    AlignedBuffer scratch = allocate(n);
    const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), scratch.get(), scratch.get(), sign, FFTW_ESTIMATE);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, Direction>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void run(fftw_plan plan, fftw_complex* buf) { fftw_execute_dft(plan, buf, buf); }

}  // namespace

void transform(std::span<cplx> data, Direction dir) {
  const std::size_t n = data.size();
  if (n == 0) return;
  fftw_plan plan = cache().get(n, dir);
  thread_local AlignedBuffer buf;
  thread_local std::size_t capacity = 0;
  if (capacity < n) {
    buf = allocate(n);
    capacity = n;
  }
  std::copy(data.begin(), data.end(), reinterpret_cast<cplx*>(buf.get()));
  run(plan, buf.get());
  std::copy_n(reinterpret_cast<const cplx*>(buf.get()), n, data.begin());
}

void transform_rows(std::span<cplx> data, std::size_t rows, std::size_t cols, Direction dir) {
  if (rows == 0 || cols == 0) return;
  fftw_plan plan = cache().get(cols, dir);
  parallel_for(rows, [&](std::size_t r) {
    thread_local AlignedBuffer buf;
    thread_local std::size_t capacity = 0;
    if (capacity < cols) {
      buf = allocate(cols);
      capacity = cols;
    }
    cplx* row = data.data() + r * cols;
    auto* scratch = reinterpret_cast<cplx*>(buf.get());
    std::copy_n(row, cols, scratch);
    run(plan, buf.get());
    std::copy_n(scratch, cols, row);
  });
}

void transform_columns(std::span<cplx> data, std::size_t rows, std::size_t cols, Direction dir) {
  if (rows == 0 || cols == 0) return;
  fftw_plan plan = cache().get(rows, dir);
  parallel_for(cols, [&](std::size_t c) {
    thread_local AlignedBuffer buf;
    thread_local std::size_t capacity = 0;
    if (capacity < rows) {
      buf = allocate(rows);
      capacity = rows;
    }
    auto* scratch = reinterpret_cast<cplx*>(buf.get());
    for (std::size_t r = 0; r < rows; ++r) scratch[r] = data[r * cols + c];
    run(plan, buf.get());
    for (std::size_t r = 0; r < rows; ++r) data[r * cols + c] = scratch[r];
  });
}

}  // namespace phasespace::fft
