#include "phasespace/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <map>
#include <set>

#include "phasespace/dynamics.hpp"
#include "phasespace/errors.hpp"
#include "phasespace/fft.hpp"

namespace phasespace {
namespace {

// -i hbar d/dx applied spectrally; the Nyquist bin has no sign and is dropped.
std::vector<cplx> apply_momentum(const Wavefunction& psi) {
  const PhaseGrid& grid = psi.grid();
  const std::size_t n = grid.size();
  std::vector<cplx> out(psi.samples().begin(), psi.samples().end());
  fft::transform(out, fft::Direction::forward);
  for (std::size_t l = 0; l < n; ++l) {
    const double q = l == n / 2 ? 0.0 : static_cast<double>(fft::signed_index(l, n)) * grid.dp();
    out[l] *= q / static_cast<double>(n);
  }
  fft::transform(out, fft::Direction::backward);
  return out;
}

double position_moment(const Wavefunction& psi, int power) {
  const PhaseGrid& grid = psi.grid();
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) sum += std::pow(grid.x(k), power) * std::norm(psi[k]);
  return sum * grid.dx();
}

double momentum_moment(const Wavefunction& psi, int power) {
  const PhaseGrid& grid = psi.grid();
  const auto phi = momentum_amplitudes(psi);
  double sum = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) sum += std::pow(grid.p(j), power) * std::norm(phi[j]);
  return sum * grid.dp();
}

MomentReport finish(double mean_x, double mean_p, double x2, double p2, double xp) {
  MomentReport m;
  m.mean_x = mean_x;
  m.mean_p = mean_p;
  m.var_x = std::max(0.0, x2 - mean_x * mean_x);
  m.var_p = std::max(0.0, p2 - mean_p * mean_p);
  m.cov_xp = xp - mean_x * mean_p;
  m.uncertainty_product = std::sqrt(m.var_x * m.var_p);
  m.blob_area = std::sqrt(std::max(0.0, m.var_x * m.var_p - m.cov_xp * m.cov_xp));
  return m;
}

}  // namespace

double expectation_operator(const Wavefunction& psi, Observable which, const Potential& v) {
  if (std::abs(psi.norm_squared() - 1.0) > kNormTolerance) {
    throw PreconditionError("observables", "psi", "wavefunction is not normalized");
  }
  const PhaseGrid& grid = psi.grid();
  switch (which) {
    case Observable::x:
      return position_moment(psi, 1);
    case Observable::x2:
      return position_moment(psi, 2);
    case Observable::p:
      return momentum_moment(psi, 1);
    case Observable::p2:
      return momentum_moment(psi, 2);
    case Observable::energy: {
      double potential = 0.0;
      for (std::size_t k = 0; k < grid.size(); ++k) potential += v.value(grid.x(k), grid.mass()) * std::norm(psi[k]);
      return momentum_moment(psi, 2) / (2.0 * grid.mass()) + potential * grid.dx();
    }
    case Observable::sym_xp: {
      // <(xp + px)/2> = Re <psi| x p |psi>
      const auto p_psi = apply_momentum(psi);
      cplx sum{};
      for (std::size_t k = 0; k < grid.size(); ++k) sum += std::conj(psi[k]) * grid.x(k) * p_psi[k];
      return sum.real() * grid.dx();
    }
  }
  return 0.0;
}

double expectation_phase_space(const WignerFunction& w, std::span<const Monomial> f) {
  for (const Monomial& term : f) {
    if (term.x_power + term.p_power > 4) {
      throw PreconditionError("observables", "f", "phase-space polynomials are limited to total degree 4");
    }
  }
  const PhaseGrid& grid = w.grid();
  const std::size_t n = grid.size();
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = grid.x(k);
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double p = grid.p(j);
      double value = 0.0;
      for (const Monomial& term : f) {
        value += term.coefficient * std::pow(x, static_cast<int>(term.x_power)) * std::pow(p, static_cast<int>(term.p_power));
      }
      row += value * w(k, j);
    }
    total += row;
  }
  return total * grid.dx() * grid.dp();
}

double phase_space_energy(const WignerFunction& w, const Potential& v) {
  const PhaseGrid& grid = w.grid();
  const std::size_t n = grid.size();
  const auto density_x = marginal_position(w);
  const auto density_p = marginal_momentum(w);
  double kinetic = 0.0;
  double potential = 0.0;
  for (std::size_t j = 0; j < n; ++j) kinetic += grid.p(j) * grid.p(j) * density_p[j];
  for (std::size_t k = 0; k < n; ++k) potential += v.value(grid.x(k), grid.mass()) * density_x[k];
  return kinetic * grid.dp() / (2.0 * grid.mass()) + potential * grid.dx();
}

MomentReport moments(const Wavefunction& psi) {
  return finish(expectation_operator(psi, Observable::x), expectation_operator(psi, Observable::p),
                expectation_operator(psi, Observable::x2), expectation_operator(psi, Observable::p2),
                expectation_operator(psi, Observable::sym_xp));
}

MomentReport moments(const WignerFunction& w) {
  if (std::abs(w.integral() - 1.0) > kNormTolerance) {
    throw PreconditionError("observables", "W", "Wigner function is not normalized");
  }
  const PhaseGrid& grid = w.grid();
  const std::size_t n = grid.size();
  double sx = 0.0, sp = 0.0, sxx = 0.0, spp = 0.0, sxp = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = grid.x(k);
    double row = 0.0, row_p = 0.0, row_pp = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double p = grid.p(j);
      const double v = w(k, j);
      row += v;
      row_p += p * v;
      row_pp += p * p * v;
    }
    sx += x * row;
    sxx += x * x * row;
    sp += row_p;
    spp += row_pp;
    sxp += x * row_p;
  }
  const double cell = grid.dx() * grid.dp();
  return finish(sx * cell, sp * cell, sxx * cell, spp * cell, sxp * cell);
}

double purity(const WignerFunction& w) {
  if (std::abs(w.integral() - 1.0) > kNormTolerance) {
    throw PreconditionError("observables", "W", "Wigner function is not normalized");
  }
  double sum = 0.0;
  for (double v : w.values()) sum += v * v;
  const PhaseGrid& grid = w.grid();
  return 2.0 * std::numbers::pi * grid.hbar() * sum * grid.dx() * grid.dp();
}

Negativity negativity(const WignerFunction& w) {
  double lowest = w.values().empty() ? 0.0 : w.values()[0];
  double absolute = 0.0;
  for (double v : w.values()) {
    lowest = std::min(lowest, v);
    absolute += std::abs(v);
  }
  return {lowest, absolute * w.grid().dx() * w.grid().dp() - 1.0};
}

std::vector<TrajectoryPoint> classical_trajectory(double x0, double p0, const Potential& v,
                                                  std::span<const double> t_grid, double dt, double mass) {
  if (!(dt > 0.0)) throw PreconditionError("observables", "dt", "time step must be positive");
  if (!(mass > 0.0)) throw PreconditionError("observables", "mass", "must be positive");
  std::vector<TrajectoryPoint> out;
  out.reserve(t_grid.size());
  double t = 0.0, x = x0, p = p0;
  auto rhs = [&](double xi, double pi_) { return std::pair{pi_ / mass, v.force(xi, mass)}; };
  for (double target : t_grid) {
    if (target < t) throw PreconditionError("observables", "t_grid", "times must be nondecreasing and >= 0");
    const double span = target - t;
    const auto steps = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
    const double h = steps == 0 ? 0.0 : span / static_cast<double>(steps);
    for (std::size_t s = 0; s < steps; ++s) {
      const auto [k1x, k1p] = rhs(x, p);
      const auto [k2x, k2p] = rhs(x + 0.5 * h * k1x, p + 0.5 * h * k1p);
      const auto [k3x, k3p] = rhs(x + 0.5 * h * k2x, p + 0.5 * h * k2p);
      const auto [k4x, k4p] = rhs(x + h * k3x, p + h * k3p);
      x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    }
    t = target;
    out.push_back({t, x, p});
  }
  return out;
}

std::vector<EhrenfestRow> ehrenfest_track(const Wavefunction& psi0, const Potential& v,
                                          std::span<const double> t_grid, double dt) {
  if (!(dt > 0.0)) throw PreconditionError("observables", "dt", "time step must be positive");
  const PhaseGrid& grid = psi0.grid();
  const double mass = grid.mass();

  std::vector<std::size_t> marks;
  for (double t : t_grid) {
    const double ratio = t / dt;
    const double rounded = std::round(ratio);
    if (t < 0.0 || std::abs(ratio - rounded) > 1e-6 * std::max(1.0, ratio)) {
      throw PreconditionError("observables", "t_grid", "times must be nonnegative multiples of dt");
    }
    marks.push_back(static_cast<std::size_t>(rounded));
  }
  std::set<std::size_t> needed{0};
  for (std::size_t m : marks) {
    needed.insert(m);
    needed.insert(m + 1);
    if (m > 0) needed.insert(m - 1);
  }

  struct Means {
    double x, p, force;
  };
  std::map<std::size_t, Means> means;
  const SchrodingerPropagator propagator(grid, v, dt);
  std::vector<cplx> samples(psi0.samples().begin(), psi0.samples().end());
  std::size_t current = 0;
  for (std::size_t mark : needed) {
    propagator.advance(samples, mark - current);
    current = mark;
    const Wavefunction psi(grid, samples, dt * static_cast<double>(mark));
    double force = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) force += v.force(grid.x(k), mass) * std::norm(psi[k]);
    means[mark] = {expectation_operator(psi, Observable::x), expectation_operator(psi, Observable::p),
                   force * grid.dx()};
  }

  const Means start = means.at(0);
  std::vector<double> times;
  for (std::size_t m : marks) times.push_back(dt * static_cast<double>(m));
  const auto classical = classical_trajectory(start.x, start.p, v, times, dt, mass);

  std::vector<EhrenfestRow> rows;
  for (std::size_t i = 0; i < marks.size(); ++i) {
    const std::size_t m = marks[i];
    const Means& here = means.at(m);
    EhrenfestRow row{};
    row.t = times[i];
    row.mean_x = here.x;
    row.mean_p = here.p;
    row.mean_force = here.force;
    row.force_at_mean = v.force(here.x, mass);
    row.classical_x = classical[i].x;
    row.classical_p = classical[i].p;
    row.has_residuals = m > 0;
    if (m > 0) {
      const Means& before = means.at(m - 1);
      const Means& after = means.at(m + 1);
      row.position_residual = std::abs((after.x - before.x) / (2.0 * dt) - here.p / mass);
      row.momentum_residual = std::abs((after.p - before.p) / (2.0 * dt) - here.force);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace phasespace
