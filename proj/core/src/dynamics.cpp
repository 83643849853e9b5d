#include "phasespace/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "phasespace/errors.hpp"
#include "phasespace/fft.hpp"
#include "phasespace/observables.hpp"
#include "phasespace/parallel.hpp"

namespace phasespace {
namespace {

std::size_t boundary_width(std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(kBoundaryFraction * static_cast<double>(n))));
}

bool in_boundary(std::size_t i, std::size_t n, std::size_t width) { return i < width || i >= n - width; }

void require_step(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("dynamics", "dt", "time step must be positive");
}

// Wavenumber of FFT bin l on a periodic axis of the given length.
double wavenumber(std::size_t l, std::size_t n, double length) {
  return 2.0 * std::numbers::pi * static_cast<double>(fft::signed_index(l, n)) / length;
}

void check_boundary_hard(double mass, const char* route) {
  if (mass > kBoundaryHardFail) {
    throw NumericalError(NumericalError::Monitor::boundary, std::string(route) + ": boundary mass " +
                                                                std::to_string(mass) + " exceeds 1e-4");
  }
}

}  // namespace

double boundary_mass(const Wavefunction& psi) {
  const std::size_t n = psi.size();
  const std::size_t width = boundary_width(n);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (in_boundary(k, n, width)) sum += std::norm(psi[k]);
  }
  return sum * psi.grid().dx();
}

double boundary_mass(const WignerFunction& w) {
  const std::size_t n = w.grid().size();
  const std::size_t width = boundary_width(n);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const bool edge_x = in_boundary(k, n, width);
    for (std::size_t j = 0; j < n; ++j) {
      if (edge_x || in_boundary(j, n, width)) sum += std::abs(w(k, j));
    }
  }
  return sum * w.grid().dx() * w.grid().dp();
}

double boundary_mass(const CharacteristicZ& z) {
  const std::size_t n = z.grid().size();
  const std::size_t width = boundary_width(n);
  double sum = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    if (in_boundary(a, n, width)) sum += std::abs(z(a, a).real());
  }
  return sum * z.grid().dx();
}

double bandwidth_excess(const Wavefunction& psi) {
  const auto phi = momentum_amplitudes(psi);
  const PhaseGrid& grid = psi.grid();
  const double cutoff = kBandwidthFraction * grid.p_nyquist();
  double outside = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double d = std::norm(phi[j]);
    total += d;
    if (std::abs(grid.p(j)) > cutoff) outside += d;
  }
  return total > 0.0 ? outside / total : 0.0;
}

// ---------------------------------------------------------------------------

SchrodingerPropagator::SchrodingerPropagator(const PhaseGrid& grid, const Potential& potential, double dt)
    : grid_(grid), dt_(dt) {
  require_step(dt);
  const std::size_t n = grid.size();
  const double hbar = grid.hbar();
  const double mass = grid.mass();
  const double inv_n = 1.0 / static_cast<double>(n);
  const double cutoff = kBandwidthFraction * grid.p_nyquist();
  kinetic_half_.resize(n);
  kinetic_full_.resize(n);
  potential_.resize(n);
  outside_band_.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    const double q = static_cast<double>(fft::signed_index(l, n)) * grid.dp();
    const double energy = q * q / (2.0 * mass);
    // 1/n of the backward transform is folded into the kinetic tables.
    kinetic_half_[l] = std::polar(inv_n, -energy * 0.5 * dt / hbar);
    kinetic_full_[l] = std::polar(inv_n, -energy * dt / hbar);
    outside_band_[l] = std::abs(q) > cutoff;
  }
  for (std::size_t k = 0; k < n; ++k) potential_[k] = std::polar(1.0, -potential.value(grid.x(k), mass) * dt / hbar);
}

void SchrodingerPropagator::advance(std::span<cplx> samples, std::size_t steps, bool conjugate,
                                    double band_reference) const {
  if (steps == 0) return;
  const std::size_t n = grid_.size();
  auto apply = [&](const std::vector<cplx>& table, std::size_t i) {
    samples[i] *= conjugate ? std::conj(table[i]) : table[i];
  };
  auto check_band = [&] {
    double outside = 0.0;
    double total = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      const double d = std::norm(samples[l]);
      total += d;
      if (outside_band_[l]) outside += d;
    }
    if (band_reference > 0.0) total = band_reference;
    if (total > 0.0 && outside > kBandwidthLimit * total) {
      throw NumericalError(NumericalError::Monitor::bandwidth,
                           "schrodinger: momentum content above 80% of Nyquist is " + std::to_string(outside / total));
    }
  };

  fft::transform(samples, fft::Direction::forward);
  check_band();
  for (std::size_t l = 0; l < n; ++l) apply(kinetic_half_, l);
  fft::transform(samples, fft::Direction::backward);
  for (std::size_t s = 0; s < steps; ++s) {
    for (std::size_t k = 0; k < n; ++k) apply(potential_, k);
    fft::transform(samples, fft::Direction::forward);
    check_band();
    const auto& kinetic = s + 1 == steps ? kinetic_half_ : kinetic_full_;
    for (std::size_t l = 0; l < n; ++l) apply(kinetic, l);
    fft::transform(samples, fft::Direction::backward);
  }
}

Wavefunction propagate_schrodinger(const Wavefunction& psi, const Potential& v, double dt, std::size_t steps) {
  require_step(dt);
  if (steps == 0) return psi;
  const SchrodingerPropagator propagator(psi.grid(), v, dt);
  const double norm0 = psi.norm_squared();
  std::vector<cplx> samples(psi.samples().begin(), psi.samples().end());
  propagator.advance(samples, steps);
  Wavefunction out(psi.grid(), std::move(samples), psi.time() + dt * static_cast<double>(steps));
  const double drift = std::abs(out.norm_squared() - norm0);
  if (drift > kNormDriftLimit) {
    throw NumericalError(NumericalError::Monitor::norm_drift, "schrodinger: norm drift " + std::to_string(drift));
  }
  check_boundary_hard(boundary_mass(out), "schrodinger");
  return out;
}

// ---------------------------------------------------------------------------

MoyalPropagator::MoyalPropagator(const PhaseGrid& grid, const Potential& potential, double dt)
    : grid_(grid), dt_(dt) {
  require_step(dt);
  const std::size_t n = grid.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  const double mass = grid.mass();
  const double hbar = grid.hbar();
  shear_half_.resize(n * n);
  shear_full_.resize(n * n);
  kick_.resize(n * n);
  // Shear tables indexed (x-wavenumber bin l, momentum sample j). The
  // unpaired Nyquist bin takes the mean of the +-k phases to keep W real.
  for (std::size_t l = 0; l < n; ++l) {
    const double k = wavenumber(l, n, grid.length());
    const bool nyquist = l == n / 2;
    for (std::size_t j = 0; j < n; ++j) {
      const double p = grid.p(j);
      const double half = k * p * 0.5 * dt / mass;
      const double full = k * p * dt / mass;
      shear_half_[l * n + j] = nyquist ? cplx(inv_n * std::cos(half)) : std::polar(inv_n, -half);
      shear_full_[l * n + j] = nyquist ? cplx(inv_n * std::cos(full)) : std::polar(inv_n, -full);
    }
  }
  // Kick table indexed (x sample k, separation bin r) with s = r dx centered.
  for (std::size_t k = 0; k < n; ++k) {
    const double x = grid.x(k);
    for (std::size_t r = 0; r < n; ++r) {
      const double s = static_cast<double>(fft::signed_index(r, n)) * grid.dx();
      const double phase =
          (dt / hbar) * (potential.value(x + 0.5 * s, mass) - potential.value(x - 0.5 * s, mass));
      kick_[k * n + r] = r == n / 2 ? cplx(inv_n * std::cos(phase)) : std::polar(inv_n, -phase);
    }
  }
}

void MoyalPropagator::shear(std::vector<cplx>& field, const std::vector<cplx>& table) const {
  const std::size_t n = grid_.size();
  fft::transform_columns(field, n, n, fft::Direction::forward);
  for (std::size_t i = 0; i < n * n; ++i) field[i] *= table[i];
  fft::transform_columns(field, n, n, fft::Direction::backward);
}

void MoyalPropagator::kick(std::vector<cplx>& field) const {
  const std::size_t n = grid_.size();
  // Backward over p gives the separation representation up to the
  // (-1)^r dp factor, which cancels against the forward transform.
  fft::transform_rows(field, n, n, fft::Direction::backward);
  for (std::size_t i = 0; i < n * n; ++i) field[i] *= kick_[i];
  fft::transform_rows(field, n, n, fft::Direction::forward);
}

void MoyalPropagator::advance(WignerFunction& w, std::size_t steps) const {
  if (steps == 0) return;
  const std::size_t n = grid_.size();
  std::vector<cplx> field(w.values().begin(), w.values().end());
  auto enforce_real = [&] {
    double residue = 0.0;
    for (cplx& v : field) {
      residue = std::max(residue, std::abs(v.imag()));
      v = v.real();
    }
    if (residue > kRealnessLimit) {
      throw NumericalError(NumericalError::Monitor::realness,
                           "moyal: imaginary residue " + std::to_string(residue) + " exceeds 1e-10");
    }
  };
  shear(field, shear_half_);
  for (std::size_t s = 0; s < steps; ++s) {
    kick(field);
    shear(field, s + 1 == steps ? shear_half_ : shear_full_);
    enforce_real();
  }
  auto values = w.values();
  for (std::size_t i = 0; i < n * n; ++i) values[i] = field[i].real();
  w.set_time(w.time() + dt_ * static_cast<double>(steps));
}

WignerFunction propagate_moyal_exact(const WignerFunction& w, const Potential& v, double dt, std::size_t steps) {
  require_step(dt);
  if (steps == 0) return w;
  const MoyalPropagator propagator(w.grid(), v, dt);
  WignerFunction out = w;
  propagator.advance(out, steps);
  const double drift = std::abs(out.integral() - w.integral());
  if (drift > kNormDriftLimit) {
    throw NumericalError(NumericalError::Monitor::norm_drift, "moyal: integral drift " + std::to_string(drift));
  }
  check_boundary_hard(boundary_mass(out), "moyal");
  return out;
}

// ---------------------------------------------------------------------------

TruncatedMoyalPropagator::TruncatedMoyalPropagator(const PhaseGrid& grid, const Potential& potential, double dt,
                                                   unsigned n_max)
    : grid_(grid), dt_(dt), n_max_(n_max) {
  require_step(dt);
  const std::size_t n = grid.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  const double mass = grid.mass();
  const double hbar = grid.hbar();
  transport_.resize(n * n);
  series_.resize(n * n);

  double transport_radius = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    const double k = l == n / 2 ? 0.0 : wavenumber(l, n, grid.length());
    for (std::size_t j = 0; j < n; ++j) {
      const double rate = -grid.p(j) / mass * k;
      transport_[l * n + j] = cplx(0.0, rate * inv_n);
      transport_radius = std::max(transport_radius, std::abs(rate));
    }
  }

  // Series term n: (-hbar^2/4)^n / (2n+1)! V^(2n+1)(x) d^(2n+1)W/dp^(2n+1),
  // with d/dp -> -i s/hbar in the separation representation.
  std::vector<double> weights(n_max + 1);
  double factorial = 1.0;
  for (unsigned m = 0; m <= n_max; ++m) {
    if (m > 0) factorial *= static_cast<double>((2 * m) * (2 * m + 1));
    weights[m] = std::pow(-0.25 * hbar * hbar, static_cast<double>(m)) / factorial;
  }
  double series_radius = 0.0;
  for (std::size_t kx = 0; kx < n; ++kx) {
    const double x = grid.x(kx);
    std::vector<double> derivs(n_max + 1);
    for (unsigned m = 0; m <= n_max; ++m) derivs[m] = potential.derivative(x, 2 * m + 1, mass);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == n / 2) continue;
      const double u = static_cast<double>(fft::signed_index(r, n)) * grid.dx() / hbar;
      // (-i u)^(2m+1) = -i u (-u^2)^m
      double sum = 0.0;
      double power = u;
      for (unsigned m = 0; m <= n_max; ++m) {
        sum += weights[m] * derivs[m] * power;
        power *= -u * u;
      }
      series_[kx * n + r] = cplx(0.0, -sum * inv_n);
      series_radius = std::max(series_radius, std::abs(sum));
    }
  }
  // RK4 is stable on the imaginary axis up to 2 sqrt 2; keep a margin.
  const double radius = transport_radius + series_radius;
  substeps_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(dt * radius / 2.5)));
}

std::vector<double> TruncatedMoyalPropagator::rate(std::span<const double> w) const {
  const std::size_t n = grid_.size();
  std::vector<cplx> transport(w.begin(), w.end());
  std::vector<cplx> series(w.begin(), w.end());
  fft::transform_columns(transport, n, n, fft::Direction::forward);
  for (std::size_t i = 0; i < n * n; ++i) transport[i] *= transport_[i];
  fft::transform_columns(transport, n, n, fft::Direction::backward);
  fft::transform_rows(series, n, n, fft::Direction::backward);
  for (std::size_t i = 0; i < n * n; ++i) series[i] *= series_[i];
  fft::transform_rows(series, n, n, fft::Direction::forward);
  std::vector<double> out(n * n);
  for (std::size_t i = 0; i < n * n; ++i) out[i] = transport[i].real() + series[i].real();
  return out;
}

void TruncatedMoyalPropagator::advance(WignerFunction& w, std::size_t steps) const {
  const std::size_t size = w.values().size();
  const double h = dt_ / static_cast<double>(substeps_);
  std::vector<double> state(w.values().begin(), w.values().end());
  std::vector<double> stage(size);
  auto l2 = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  for (std::size_t s = 0; s < steps * substeps_; ++s) {
    const double before = l2(state);
    const auto k1 = rate(state);
    for (std::size_t i = 0; i < size; ++i) stage[i] = state[i] + 0.5 * h * k1[i];
    const auto k2 = rate(stage);
    for (std::size_t i = 0; i < size; ++i) stage[i] = state[i] + 0.5 * h * k2[i];
    const auto k3 = rate(stage);
    for (std::size_t i = 0; i < size; ++i) stage[i] = state[i] + h * k3[i];
    const auto k4 = rate(stage);
    for (std::size_t i = 0; i < size; ++i) state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    const double after = l2(state);
    if (after > before * (1.0 + kStiffnessGrowthLimit)) {
      throw NumericalError(NumericalError::Monitor::stiffness,
                           "moyal-truncated: L2 norm grew by " + std::to_string(after / before - 1.0) + " in one step");
    }
  }
  std::copy(state.begin(), state.end(), w.values().begin());
  w.set_time(w.time() + dt_ * static_cast<double>(steps));
}

WignerFunction propagate_moyal_truncated(const WignerFunction& w, const Potential& v, double dt, std::size_t steps,
                                         unsigned n_max) {
  require_step(dt);
  if (steps == 0) return w;
  const TruncatedMoyalPropagator propagator(w.grid(), v, dt, n_max);
  WignerFunction out = w;
  propagator.advance(out, steps);
  check_boundary_hard(boundary_mass(out), "moyal-truncated");
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void evolve_kernel(std::vector<cplx>& values, std::size_t n, const SchrodingerPropagator& propagator,
                   std::size_t steps) {
  // Columns carry the ket coordinate y, rows the bra coordinate y'. Most
  // columns hold almost nothing, so bandwidth is judged against the
  // spectral mass of the whole kernel, which the evolution conserves.
  double reference = 0.0;
  for (const cplx& v : values) reference += std::norm(v);
  reference *= static_cast<double>(n);
  parallel_for(n, [&](std::size_t b) {
    std::vector<cplx> column(n);
    for (std::size_t a = 0; a < n; ++a) column[a] = values[a * n + b];
    propagator.advance(column, steps, false, reference);
    for (std::size_t a = 0; a < n; ++a) values[a * n + b] = column[a];
  });
  parallel_for(n, [&](std::size_t a) {
    std::span<cplx> row(values.data() + a * n, n);
    propagator.advance(row, steps, /*conjugate=*/true, reference);
  });
}

}  // namespace

CharacteristicZ propagate_characteristic(const CharacteristicZ& z, const Potential& v, double dt, std::size_t steps) {
  require_step(dt);
  if (steps == 0) return z;
  const std::size_t n = z.grid().size();
  const SchrodingerPropagator propagator(z.grid(), v, dt);
  std::vector<cplx> values(z.values().begin(), z.values().end());
  evolve_kernel(values, n, propagator, steps);
  CharacteristicZ out(z.grid(), std::move(values), z.time() + dt * static_cast<double>(steps));
  const double drift = std::abs(out.trace() - z.trace());
  if (drift > kNormDriftLimit) {
    throw NumericalError(NumericalError::Monitor::norm_drift, "characteristic: trace drift " + std::to_string(drift));
  }
  check_boundary_hard(boundary_mass(out), "characteristic");
  return out;
}

double l2_distance(const WignerFunction& a, const WignerFunction& b) {
  if (!(a.grid() == b.grid())) throw PreconditionError("dynamics", "W", "grid mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    const double d = a.values()[i] - b.values()[i];
    sum += d * d;
  }
  return std::sqrt(sum * a.grid().dx() * a.grid().dp());
}

// ---------------------------------------------------------------------------

double EvolutionReport::max_discrepancy() const {
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max({worst, r.ab, r.ac, r.bc});
  return worst;
}

double EvolutionReport::max_boundary() const {
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.boundary);
  return worst;
}

double EvolutionReport::max_norm_drift() const {
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max({worst, r.norm_drift_a, r.norm_drift_b, r.norm_drift_c});
  return worst;
}

double EvolutionReport::max_energy_drift() const {
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max({worst, r.energy_drift_a, r.energy_drift_b, r.energy_drift_c});
  return worst;
}

double EvolutionReport::max_factorization_residual() const {
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.factorization_residual);
  return worst;
}

bool EvolutionReport::boundary_flagged() const {
  return std::any_of(rows.begin(), rows.end(), [](const EvolutionRow& r) { return r.boundary_flagged; });
}

EvolutionReport cross_validate(const Wavefunction& psi0, const Potential& v, double t_final, double dt,
                               std::span<const double> sample_times, const SnapshotObserver& observer) {
  require_step(dt);
  if (!(t_final >= 0.0)) throw PreconditionError("dynamics", "t_final", "must be nonnegative");
  std::vector<std::size_t> step_marks;
  step_marks.reserve(sample_times.size());
  for (double t : sample_times) {
    if (t < 0.0 || t > t_final * (1.0 + 1e-12) + 1e-12) {
      throw PreconditionError("dynamics", "sample_times", "sample time outside [0, t_final]");
    }
    const double ratio = t / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-6 * std::max(1.0, ratio)) {
      throw PreconditionError("dynamics", "sample_times", "sample time is not a multiple of dt");
    }
    const auto mark = static_cast<std::size_t>(rounded);
    if (!step_marks.empty() && mark < step_marks.back()) {
      throw PreconditionError("dynamics", "sample_times", "sample times must be nondecreasing");
    }
    step_marks.push_back(mark);
  }

  EvolutionReport report;
  if (step_marks.empty()) return report;

  const PhaseGrid& grid = psi0.grid();
  const std::size_t n = grid.size();
  const SchrodingerPropagator schrodinger(grid, v, dt);
  const MoyalPropagator moyal(grid, v, dt);

  std::vector<cplx> psi(psi0.samples().begin(), psi0.samples().end());
  WignerFunction w_b = wigner_transform(psi0);
  CharacteristicZ z = to_characteristic(w_b);
  std::vector<cplx> kernel(z.values().begin(), z.values().end());

  const double energy_a0 = expectation_operator(psi0, Observable::energy, v);
  const double energy_b0 = phase_space_energy(w_b, v);
  const double energy_c0 = energy_b0;
  auto relative = [](double value, double reference) {
    return std::abs(value - reference) / std::max(std::abs(reference), 1e-12);
  };

  std::size_t current = 0;
  for (std::size_t i = 0; i < step_marks.size(); ++i) {
    const std::size_t advance = step_marks[i] - current;
    schrodinger.advance(psi, advance);
    moyal.advance(w_b, advance);
    evolve_kernel(kernel, n, schrodinger, advance);
    current = step_marks[i];
    const double t = psi0.time() + dt * static_cast<double>(current);
    w_b.set_time(t);

    const Wavefunction psi_a(grid, psi, t);
    const CharacteristicZ z_c(grid, kernel, t);
    const Factorization factor = factorize_characteristic(z_c);
    const WignerFunction w_a = wigner_transform(psi_a);
    const WignerFunction w_c = wigner_transform(factor.state);

    EvolutionRow row;
    row.t = t;
    row.ab = l2_distance(w_a, w_b);
    row.ac = l2_distance(w_a, w_c);
    row.bc = l2_distance(w_b, w_c);
    row.boundary = std::max({boundary_mass(w_a), boundary_mass(w_b), boundary_mass(w_c)});
    row.boundary_flagged = row.boundary > kBoundaryFlag;
    check_boundary_hard(row.boundary, "cross_validate");
    row.norm_drift_a = std::abs(psi_a.norm_squared() - psi0.norm_squared());
    row.norm_drift_b = std::abs(w_b.integral() - 1.0);
    row.norm_drift_c = std::abs(z_c.trace() - 1.0);
    row.energy_drift_a = relative(expectation_operator(psi_a, Observable::energy, v), energy_a0);
    row.energy_drift_b = relative(phase_space_energy(w_b, v), energy_b0);
    row.energy_drift_c = relative(phase_space_energy(w_c, v), energy_c0);
    row.factorization_residual = factor.residual;
    report.rows.push_back(row);
    if (observer) observer(i, w_a, w_b, w_c);
  }
  return report;
}

}  // namespace phasespace
