#pragma once

#include <span>
#include <vector>

#include "phasespace/potential.hpp"
#include "phasespace/states.hpp"
#include "phasespace/wigner.hpp"

namespace phasespace {

enum class Observable { x, p, x2, p2, energy, sym_xp };

/// <psi| O |psi> with x by quadrature and p = -i hbar d/dx applied spectrally.
/// sym_xp is <(xp + px)/2>. energy needs the potential.
double expectation_operator(const Wavefunction& psi, Observable which, const Potential& v = Potential::free());

/// One term c x^i p^j of a phase-space polynomial.
struct Monomial {
  double coefficient;
  unsigned x_power;
  unsigned p_power;
};

/// integral f(x, p) W(x, p) dx dp for polynomial f of total degree <= 4.
double expectation_phase_space(const WignerFunction& w, std::span<const Monomial> f);

/// <p^2/2m + V> as a phase-space average; no degree restriction.
double phase_space_energy(const WignerFunction& w, const Potential& v);

struct MomentReport {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.0;
  double var_p = 0.0;
  double cov_xp = 0.0;  ///< symmetrized
  double uncertainty_product = 0.0;
  double blob_area = 0.0;  ///< sqrt(var_x var_p - cov_xp^2)
};

/// Operator route.
MomentReport moments(const Wavefunction& psi);
/// Phase-space route.
MomentReport moments(const WignerFunction& w);

/// 2 pi hbar integral W^2; 1 for pure states.
double purity(const WignerFunction& w);

struct Negativity {
  double min_value;
  double negative_volume;  ///< integral |W| - 1
};
Negativity negativity(const WignerFunction& w);

struct TrajectoryPoint {
  double t;
  double x;
  double p;
};

/// RK4 for dx/dt = p/m, dp/dt = -V'(x). Each interval between requested
/// times is split into equal steps no longer than dt.
std::vector<TrajectoryPoint> classical_trajectory(double x0, double p0, const Potential& v,
                                                  std::span<const double> t_grid, double dt, double mass = 1.0);

struct EhrenfestRow {
  double t;
  double mean_x;
  double mean_p;
  double mean_force;     ///< <F(x)>
  double force_at_mean;  ///< F(<x>)
  double classical_x;
  double classical_p;
  /// Centered-difference residuals |d<x>/dt - <p>/m| and |d<p>/dt - <F>|;
  /// only meaningful when t >= dt.
  bool has_residuals;
  double position_residual;
  double momentum_residual;
};

/// Quantum means along a split-step evolution next to the classical
/// trajectory started at (<x>_0, <p>_0).
std::vector<EhrenfestRow> ehrenfest_track(const Wavefunction& psi0, const Potential& v,
                                          std::span<const double> t_grid, double dt);

}  // namespace phasespace
