#include "phasespace/grid.hpp"

#include <cmath>
#include <string>

#include "phasespace/errors.hpp"

namespace phasespace {

PhaseGrid::PhaseGrid(std::size_t n, double x_min, double x_max, double hbar, double mass)
    : n_(n), x_min_(x_min), hbar_(hbar), mass_(mass) {
  if (n < 8) throw PreconditionError("grid", "n", "sample count must be >= 8, got " + std::to_string(n));
  if (n % 2 != 0) throw PreconditionError("grid", "n", "sample count must be even, got " + std::to_string(n));
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    throw PreconditionError("grid", "x_max", "degenerate bounds: x_max must exceed x_min");
  }
  if (!std::isfinite(hbar) || !(hbar > 0.0)) throw PreconditionError("grid", "hbar", "must be positive");
  if (!std::isfinite(mass) || !(mass > 0.0)) throw PreconditionError("grid", "mass", "must be positive");
  dx_ = (x_max - x_min) / static_cast<double>(n);
  dp_ = 2.0 * std::numbers::pi * hbar / (static_cast<double>(n) * dx_);
}

std::vector<double> PhaseGrid::x_axis() const {
  std::vector<double> axis(n_);
  for (std::size_t k = 0; k < n_; ++k) axis[k] = x(k);
  return axis;
}

std::vector<double> PhaseGrid::p_axis() const {
  std::vector<double> axis(n_);
  for (std::size_t j = 0; j < n_; ++j) axis[j] = p(j);
  return axis;
}

bool PhaseGrid::is_square() const noexcept {
  const double half = static_cast<double>(n_ / 2);
  return std::abs(dx_ - dp_) <= 1e-12 * dp_ && std::abs(x_min_ + half * dx_) <= 1e-12 * dx_ * half;
}

PhaseGrid make_grid(std::size_t n, double x_min, double x_max, double hbar, double mass) {
  return PhaseGrid(n, x_min, x_max, hbar, mass);
}

PhaseGrid make_square_grid(std::size_t n, double hbar, double mass) {
  if (!(hbar > 0.0)) throw PreconditionError("grid", "hbar", "must be positive");
  const double half_length = 0.5 * std::sqrt(2.0 * std::numbers::pi * hbar * static_cast<double>(n));
  return PhaseGrid(n, -half_length, half_length, hbar, mass);
}

}  // namespace phasespace
