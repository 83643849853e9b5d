#pragma once

#include <complex>
#include <span>
#include <vector>

#include "phasespace/grid.hpp"

namespace phasespace {

using cplx = std::complex<double>;

/// Complex position-space samples on a PhaseGrid at time t.
class Wavefunction {
 public:
  Wavefunction(PhaseGrid grid, std::vector<cplx> samples, double t = 0.0);

  const PhaseGrid& grid() const noexcept { return grid_; }
  std::span<const cplx> samples() const noexcept { return samples_; }
  std::span<cplx> samples() noexcept { return samples_; }
  cplx operator[](std::size_t k) const noexcept { return samples_[k]; }
  std::size_t size() const noexcept { return samples_.size(); }
  double time() const noexcept { return t_; }
  void set_time(double t) noexcept { t_ = t; }

  /// sum |psi_k|^2 dx
  double norm_squared() const;
  Wavefunction normalized() const;

 private:
  PhaseGrid grid_;
  std::vector<cplx> samples_;
  double t_;
};

/// Normalization tolerance used by every constructor and by consumers that
/// require a normalized input.
inline constexpr double kNormTolerance = 1e-8;

/// Minimum-uncertainty packet psi ~ exp(-(x-x0)^2/(4 sigma^2) + i p0 x / hbar).
/// Requires x0 +- 5 sigma inside the domain and p0 +- 5 hbar/(2 sigma) inside
/// the momentum range.
Wavefunction gaussian_packet(const PhaseGrid& grid, double x0, double p0, double sigma);

/// Hermite-function eigenstate of p^2/2m + m omega^2 x^2 / 2.
Wavefunction harmonic_eigenstate(const PhaseGrid& grid, unsigned level, double omega);

struct Superposition {
  Wavefunction state;
  double raw_norm;  ///< L2 norm of the linear combination before renormalizing
};

Superposition superpose(std::span<const Wavefunction> states, std::span<const cplx> coefficients);

/// Equal-weight superposition of Gaussians at +offset and -offset.
Wavefunction cat_state(const PhaseGrid& grid, double offset, double sigma);

/// Two Gaussian apertures of the given width, centered at +-separation/2.
/// Models a wavefunction projected onto two slits.
Wavefunction two_slit_state(const PhaseGrid& grid, double separation, double slit_width);

/// Momentum-space wavefunction Phi(p_j) on the grid's monotonic p axis,
/// normalized so that sum |Phi|^2 dp = sum |psi|^2 dx.
std::vector<cplx> momentum_amplitudes(const Wavefunction& psi);

/// |<a|b>| for two states on the same grid.
double fidelity(const Wavefunction& a, const Wavefunction& b);

}  // namespace phasespace
