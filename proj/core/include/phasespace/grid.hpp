#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

namespace phasespace {

/// Position/momentum lattice with exact FFT conjugacy: dx * dp * n = 2 pi hbar.
///
/// Position sample k sits at x_min + k dx. Momentum sample j sits at
/// (j - n/2) dp, i.e. the momentum axis is stored in monotonic
/// (fft-shifted) order; spectral kernels undo the shift internally.
/// Both axes are periodic. hbar and mass live here so that every
/// downstream operation reads them from a single place.
class PhaseGrid {
 public:
  PhaseGrid(std::size_t n, double x_min, double x_max, double hbar = 1.0, double mass = 1.0);

  std::size_t size() const noexcept { return n_; }
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_min_ + length(); }
  double hbar() const noexcept { return hbar_; }
  double mass() const noexcept { return mass_; }
  double dx() const noexcept { return dx_; }
  double dp() const noexcept { return dp_; }
  double length() const noexcept { return static_cast<double>(n_) * dx_; }

  double x(std::size_t k) const noexcept { return x_min_ + static_cast<double>(k) * dx_; }
  double p(std::size_t j) const noexcept {
    return (static_cast<double>(j) - static_cast<double>(n_ / 2)) * dp_;
  }
  /// Largest representable |p|, n dp / 2.
  double p_nyquist() const noexcept { return static_cast<double>(n_ / 2) * dp_; }

  std::vector<double> x_axis() const;
  std::vector<double> p_axis() const;

  /// True when dx == dp (to rounding) and the x axis is centered like the
  /// p axis, so phase-space rotations map the grid onto itself.
  bool is_square() const noexcept;

  friend bool operator==(const PhaseGrid&, const PhaseGrid&) = default;

 private:
  std::size_t n_;
  double x_min_;
  double hbar_;
  double mass_;
  double dx_;
  double dp_;
};

PhaseGrid make_grid(std::size_t n, double x_min, double x_max, double hbar = 1.0, double mass = 1.0);

/// Centered grid with dx == dp = sqrt(2 pi hbar / n).
PhaseGrid make_square_grid(std::size_t n, double hbar = 1.0, double mass = 1.0);

}  // namespace phasespace
