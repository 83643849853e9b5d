#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "phasespace/potential.hpp"
#include "phasespace/states.hpp"
#include "phasespace/wigner.hpp"

namespace phasespace {

// Monitor thresholds shared by all propagation routes.
inline constexpr double kBoundaryFraction = 0.05;     ///< outer share of each axis watched
inline constexpr double kBoundaryFlag = 1e-8;         ///< reported, not fatal
inline constexpr double kBoundaryHardFail = 1e-4;     ///< NumericalError
inline constexpr double kBandwidthFraction = 0.8;     ///< of the momentum Nyquist
inline constexpr double kBandwidthLimit = 1e-6;       ///< probability allowed beyond it
inline constexpr double kNormDriftLimit = 1e-9;
inline constexpr double kRealnessLimit = 1e-10;
inline constexpr double kStiffnessGrowthLimit = 1e-6;  ///< per RK4 step, relative L2

/// |psi|^2 mass in the outer 5% of the position axis.
double boundary_mass(const Wavefunction& psi);
/// |W| mass in the outer 5% of either axis.
double boundary_mass(const WignerFunction& w);
/// Diagonal density mass of Z in the outer 5% of the position axis.
double boundary_mass(const CharacteristicZ& z);

/// Share of momentum probability above 80% of the Nyquist momentum.
double bandwidth_excess(const Wavefunction& psi);

/// Strang split-step for i hbar psi_t = (p^2/2m + V) psi:
/// half kinetic phase in momentum space, full potential phase, half kinetic.
class SchrodingerPropagator {
 public:
  SchrodingerPropagator(const PhaseGrid& grid, const Potential& potential, double dt);

  /// Advances raw samples in place. When conjugate is set the samples are
  /// evolved with the complex-conjugate propagator (the bra side of Z).
  /// band_reference > 0 replaces the vector's own spectral mass as the
  /// denominator of the bandwidth monitor.
  void advance(std::span<cplx> samples, std::size_t steps, bool conjugate = false, double band_reference = 0.0) const;
  double dt() const noexcept { return dt_; }

 private:
  PhaseGrid grid_;
  double dt_;
  std::vector<cplx> kinetic_half_;
  std::vector<cplx> kinetic_full_;
  std::vector<cplx> potential_;
  std::vector<bool> outside_band_;
};

/// Phase-space Strang splitting of the resummed Moyal equation:
/// exact kinetic shear via FFT over x, exact potential kick
/// exp(-(i dt/hbar)[V(x + s/2) - V(x - s/2)]) via FFT over p.
class MoyalPropagator {
 public:
  MoyalPropagator(const PhaseGrid& grid, const Potential& potential, double dt);

  void advance(WignerFunction& w, std::size_t steps) const;
  double dt() const noexcept { return dt_; }

 private:
  void shear(std::vector<cplx>& field, const std::vector<cplx>& table) const;
  void kick(std::vector<cplx>& field) const;

  PhaseGrid grid_;
  double dt_;
  std::vector<cplx> shear_half_;
  std::vector<cplx> shear_full_;
  std::vector<cplx> kick_;
};

/// Method-of-lines RK4 on the Moyal series truncated after n_max quantum
/// corrections. n_max = 0 is the classical Liouville equation.
class TruncatedMoyalPropagator {
 public:
  TruncatedMoyalPropagator(const PhaseGrid& grid, const Potential& potential, double dt, unsigned n_max);

  void advance(WignerFunction& w, std::size_t steps) const;
  double dt() const noexcept { return dt_; }
  std::size_t substeps() const noexcept { return substeps_; }

  /// dW/dt for the truncated generator.
  std::vector<double> rate(std::span<const double> w) const;

 private:
  PhaseGrid grid_;
  double dt_;
  unsigned n_max_;
  std::size_t substeps_;
  std::vector<cplx> transport_;  ///< -(p/m) i k on (l, j)
  std::vector<cplx> series_;     ///< potential series on (k, r), includes 1/n
};

Wavefunction propagate_schrodinger(const Wavefunction& psi, const Potential& v, double dt, std::size_t steps);
WignerFunction propagate_moyal_exact(const WignerFunction& w, const Potential& v, double dt, std::size_t steps);
WignerFunction propagate_moyal_truncated(const WignerFunction& w, const Potential& v, double dt, std::size_t steps,
                                         unsigned n_max);
/// Z(y, y') -> U Z U^dagger: forward split-step along y, conjugate along y'.
CharacteristicZ propagate_characteristic(const CharacteristicZ& z, const Potential& v, double dt, std::size_t steps);

/// sqrt(sum (a - b)^2 dx dp)
double l2_distance(const WignerFunction& a, const WignerFunction& b);

struct EvolutionRow {
  double t = 0.0;
  double ab = 0.0;  ///< schrodinger vs exact Moyal
  double ac = 0.0;  ///< schrodinger vs characteristic
  double bc = 0.0;  ///< exact Moyal vs characteristic
  double boundary = 0.0;
  bool boundary_flagged = false;
  double norm_drift_a = 0.0;
  double norm_drift_b = 0.0;
  double norm_drift_c = 0.0;
  double energy_drift_a = 0.0;
  double energy_drift_b = 0.0;
  double energy_drift_c = 0.0;
  double factorization_residual = 0.0;
};

struct EvolutionReport {
  std::vector<EvolutionRow> rows;

  double max_discrepancy() const;
  double max_boundary() const;
  double max_norm_drift() const;
  double max_energy_drift() const;
  double max_factorization_residual() const;
  bool boundary_flagged() const;
};

/// Per-sample field observer: (row index, route a, route b, route c).
using SnapshotObserver =
    std::function<void(std::size_t, const WignerFunction&, const WignerFunction&, const WignerFunction&)>;

/// Route (a): Schrodinger then Wigner transform.
/// Route (b): Wigner transform then exact Moyal.
/// Route (c): characteristic kernel, its two-coordinate evolution,
///            rank-1 factorization, then Wigner transform.
EvolutionReport cross_validate(const Wavefunction& psi0, const Potential& v, double t_final, double dt,
                               std::span<const double> sample_times, const SnapshotObserver& observer = {});

}  // namespace phasespace
