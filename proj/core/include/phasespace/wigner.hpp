#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "phasespace/grid.hpp"
#include "phasespace/states.hpp"

namespace phasespace {

/// Real Wigner field on the n x n (x, p) grid, stored x-major:
/// value(k, j) = W(x_k, p_j).
class WignerFunction {
 public:
  WignerFunction(PhaseGrid grid, std::vector<double> values, double t = 0.0);

  const PhaseGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator()(std::size_t k, std::size_t j) const noexcept { return values_[k * grid_.size() + j]; }
  double time() const noexcept { return t_; }
  void set_time(double t) noexcept { t_ = t; }

  /// sum W dx dp
  double integral() const;

 private:
  PhaseGrid grid_;
  std::vector<double> values_;
  double t_;
};

/// Two-point kernel Z(y_a, y_b) on the n x n position grid, stored with y
/// as the row index: value(a, b) = Z(y_a, y_b). For a pure state it equals
/// psi(y_a) conj(psi(y_b)).
class CharacteristicZ {
 public:
  CharacteristicZ(PhaseGrid grid, std::vector<cplx> values, double t = 0.0);

  const PhaseGrid& grid() const noexcept { return grid_; }
  std::span<const cplx> values() const noexcept { return values_; }
  std::span<cplx> values() noexcept { return values_; }
  cplx operator()(std::size_t a, std::size_t b) const noexcept { return values_[a * grid_.size() + b]; }
  double time() const noexcept { return t_; }
  void set_time(double t) noexcept { t_ = t; }

  /// sum_a Z(y_a, y_a) dx
  double trace() const;
  /// max |Z(a, b) - conj(Z(b, a))|
  double hermiticity_deviation() const;

 private:
  PhaseGrid grid_;
  std::vector<cplx> values_;
  double t_;
};

/// Correlation field C(x_k, s_r) = integral W(x_k, p) exp(i p s_r / hbar) dp
/// with s_r = r dx for centered r in [-n/2, n/2), stored x-major with r in
/// FFT order (column r mod n). This is the (x, x') form of the
/// characteristic function before the change of variables to (y, y').
struct CorrelationField {
  PhaseGrid grid;
  std::vector<cplx> values;
};

struct WignerTransform {
  WignerFunction wigner;
  double imaginary_residue;  ///< max |Im| of the transform before it was discarded
};

/// W(x,p) = (1/2 pi hbar) integral conj(psi(x - s/2)) psi(x + s/2) exp(-i p s / hbar) ds.
///
/// psi is spectrally upsampled onto a half-spacing axis so both x +- s/2
/// land on samples; pairs leaving the domain contribute nothing.
/// Throws NumericalError if the imaginary residue exceeds 1e-12.
WignerTransform wigner_transform_checked(const Wavefunction& psi);
WignerFunction wigner_transform(const Wavefunction& psi);

/// integral W dp, density over x.
std::vector<double> marginal_position(const WignerFunction& w);
/// integral W dx, density over p.
std::vector<double> marginal_momentum(const WignerFunction& w);

/// Inverse Fourier transform of W over p, row by row.
CorrelationField correlation_field(const WignerFunction& w);
/// Exact inverse of correlation_field; the imaginary part is discarded.
WignerFunction wigner_from_correlation(const CorrelationField& c, double t = 0.0);

/// Builds Z(y, y') from W via the correlation field, with the midpoint
/// axis spectrally upsampled to reach (y + y')/2 on half-grid points.
/// Entries with |y - y'| >= L/2 are set to zero: the grid cannot tell such
/// separations from their periodic images, so states are expected to
/// occupy less than half the domain.
CharacteristicZ to_characteristic(const WignerFunction& w);

/// Minimum 2 pi hbar integral W^2 accepted by reconstruct_wavefunction.
inline constexpr double kPurityGate = 0.999;

/// psi(x) conj(psi(x_a)) = integral W((x + x_a)/2, p) exp(i p (x - x_a)/hbar) dp
/// anchored at the maximum of the position marginal, normalized, with
/// psi(x_a) real and positive.
Wavefunction reconstruct_wavefunction(const WignerFunction& w);

struct Factorization {
  Wavefunction state;
  double residual;     ///< 1 - lambda_max / trace
  double eigenvalue;   ///< lambda_max
  std::size_t iterations;
};

/// Dominant eigenfunction of the Hermitian kernel Z by power iteration.
Factorization factorize_characteristic(const CharacteristicZ& z, std::size_t max_iterations = 10000);

}  // namespace phasespace
