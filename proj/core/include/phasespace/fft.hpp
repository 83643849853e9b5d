#pragma once

#include <complex>
#include <cstddef>
#include <span>

// Thin wrapper over FFTW. All transforms are unnormalized:
//   forward:  X_l = sum_k x_k exp(-2 pi i k l / n)
//   backward: x_k = sum_l X_l exp(+2 pi i k l / n)
// Plans are built with FFTW_ESTIMATE and executed on aligned scratch
// buffers, so repeated runs produce identical bits.
namespace phasespace::fft {

using cplx = std::complex<double>;

enum class Direction { forward, backward };

void transform(std::span<cplx> data, Direction dir);

/// Transforms each contiguous row of a rows x cols row-major array.
void transform_rows(std::span<cplx> data, std::size_t rows, std::size_t cols, Direction dir);

/// Transforms each column of a rows x cols row-major array.
void transform_columns(std::span<cplx> data, std::size_t rows, std::size_t cols, Direction dir);

/// Signed DFT frequency index of bin l for a length-n transform.
inline long signed_index(std::size_t l, std::size_t n) {
  return l < (n + 1) / 2 ? static_cast<long>(l) : static_cast<long>(l) - static_cast<long>(n);
}

}  // namespace phasespace::fft
