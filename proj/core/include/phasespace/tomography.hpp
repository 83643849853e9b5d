#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "phasespace/grid.hpp"
#include "phasespace/wigner.hpp"

namespace phasespace {

/// Quadrature marginals w(X; theta) of a Wigner function for the frames
/// (mu, nu) = (cos theta, sin theta). Values are frame-major:
/// value(f, i) = w(X_i; theta_f).
struct Tomogram {
  std::vector<double> angles;
  std::vector<double> X;
  std::vector<double> values;
  double dX = 0.0;
  double hbar = 1.0;
  /// Most negative marginal value seen before clipping to zero.
  double min_raw = 0.0;

  std::size_t frames() const noexcept { return angles.size(); }
  std::span<const double> frame(std::size_t f) const { return {values.data() + f * X.size(), X.size()}; }
  double mu(std::size_t f) const;
  double nu(std::size_t f) const;
};

/// theta_f = f pi / count
std::vector<double> equispaced_angles(std::size_t count);

/// W rotated so that its first axis is the quadrature X = cos(theta) x + sin(theta) p:
/// result(u, v) = W(u cos theta - v sin theta, u sin theta + v cos theta).
/// Exact quarter turns by index permutation, remainder by three FFT shears.
/// Requires a square grid.
WignerFunction rotate_phase_space(const WignerFunction& w, double theta);

/// Projects W on each frame. Angles must lie in [0, pi) and be distinct.
Tomogram forward_tomogram(const WignerFunction& w, std::span<const double> angles);

/// Filtered back-projection: Ram-Lak ramp with a raised-cosine roll-off
/// starting at 80% of Nyquist, linear interpolation on an 8x spectrally
/// refined quadrature axis, output normalized to unit integral.
/// Fewer than 2 frames is an error; fewer than 32 prints a warning.
WignerFunction inverse_tomogram(const Tomogram& tomo, const PhaseGrid& target);

/// Density of the scaled quadrature s (cos theta x + sin theta p) for one
/// frame, obtained by rescaling X: w_s(X) = w(X / s) / s.
struct QuadratureDensity {
  std::vector<double> X;
  std::vector<double> density;
};
QuadratureDensity scaled_frame(const Tomogram& tomo, std::size_t frame, double scale);

}  // namespace phasespace
