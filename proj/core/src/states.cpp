#include "phasespace/states.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "phasespace/errors.hpp"
#include "phasespace/fft.hpp"

namespace phasespace {

Wavefunction::Wavefunction(PhaseGrid grid, std::vector<cplx> samples, double t)
    : grid_(std::move(grid)), samples_(std::move(samples)), t_(t) {
  if (samples_.size() != grid_.size()) {
    throw PreconditionError("states", "samples", "length " + std::to_string(samples_.size()) +
                                                     " does not match grid size " + std::to_string(grid_.size()));
  }
}

double Wavefunction::norm_squared() const {
  double sum = 0.0;
  for (const cplx& v : samples_) sum += std::norm(v);
  return sum * grid_.dx();
}

Wavefunction Wavefunction::normalized() const {
  const double n2 = norm_squared();
  if (!(n2 > 0.0)) throw PreconditionError("states", "samples", "cannot normalize a zero state");
  const double scale = 1.0 / std::sqrt(n2);
  std::vector<cplx> out(samples_.begin(), samples_.end());
  for (cplx& v : out) v *= scale;
  return Wavefunction(grid_, std::move(out), t_);
}

Wavefunction gaussian_packet(const PhaseGrid& grid, double x0, double p0, double sigma) {
  if (!(sigma > 0.0)) throw PreconditionError("states", "sigma", "must be positive");
  if (x0 - 5.0 * sigma < grid.x_min() || x0 + 5.0 * sigma > grid.x_max()) {
    throw PreconditionError("states", "x0", "support x0 +- 5 sigma leaves the domain");
  }
  const double sigma_p = grid.hbar() / (2.0 * sigma);
  if (std::abs(p0) + 5.0 * sigma_p > grid.p_nyquist()) {
    throw PreconditionError("states", "p0", "support p0 +- 5 hbar/(2 sigma) exceeds the momentum range");
  }
  std::vector<cplx> samples(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double x = grid.x(k);
    const double u = x - x0;
    samples[k] = std::exp(cplx(-u * u / (4.0 * sigma * sigma), p0 * x / grid.hbar()));
  }
  return Wavefunction(grid, std::move(samples)).normalized();
}

Wavefunction harmonic_eigenstate(const PhaseGrid& grid, unsigned level, double omega) {
  if (level > 20) throw PreconditionError("states", "level", "levels above 20 are not supported");
  if (!(omega > 0.0)) throw PreconditionError("states", "omega", "must be positive");
  const double length = std::sqrt(grid.hbar() / (grid.mass() * omega));
  if (length < 4.0 * grid.dx()) {
    throw PreconditionError("states", "omega", "oscillator length resolved by fewer than 4 samples");
  }
  // Classical turning point sqrt(2n+1) l plus a Gaussian tail margin.
  const double extent = (std::sqrt(2.0 * level + 1.0) + 4.0) * length;
  if (-extent < grid.x_min() || extent > grid.x_max()) {
    throw PreconditionError("states", "level", "eigenstate not contained in the domain");
  }
  if (extent * grid.hbar() / (length * length) > grid.p_nyquist()) {
    throw PreconditionError("states", "level", "eigenstate momentum extent exceeds the momentum range");
  }
  std::vector<cplx> samples(grid.size());
  const double norm0 = 1.0 / std::sqrt(std::sqrt(std::numbers::pi) * length);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double xi = grid.x(k) / length;
    // Recurrence on normalized Hermite functions.
    double prev = 0.0;
    double curr = norm0 * std::exp(-0.5 * xi * xi);
    for (unsigned m = 0; m < level; ++m) {
      const double next = std::sqrt(2.0 / (m + 1.0)) * xi * curr - std::sqrt(m / (m + 1.0)) * prev;
      prev = curr;
      curr = next;
    }
    samples[k] = curr;
  }
  return Wavefunction(grid, std::move(samples)).normalized();
}

Superposition superpose(std::span<const Wavefunction> states, std::span<const cplx> coefficients) {
  if (states.empty()) throw PreconditionError("states", "states", "empty superposition");
  if (states.size() != coefficients.size()) {
    throw PreconditionError("states", "coefficients", "count does not match the number of states");
  }
  const PhaseGrid& grid = states.front().grid();
  bool any_nonzero = false;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!(states[i].grid() == grid)) throw PreconditionError("states", "states", "grid mismatch");
    if (states[i].time() != states.front().time()) throw PreconditionError("states", "states", "time stamp mismatch");
    if (coefficients[i] != cplx{}) any_nonzero = true;
  }
  if (!any_nonzero) throw PreconditionError("states", "coefficients", "all coefficients are zero");

  std::vector<cplx> sum(grid.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t k = 0; k < grid.size(); ++k) sum[k] += coefficients[i] * states[i][k];
  }
  Wavefunction combined(grid, std::move(sum), states.front().time());
  const double raw_norm = std::sqrt(combined.norm_squared());
  if (raw_norm < 1e-14) {
    throw PreconditionError("states", "coefficients", "all contributions cancel (norm below 1e-14)");
  }
  return {combined.normalized(), raw_norm};
}

Wavefunction cat_state(const PhaseGrid& grid, double offset, double sigma) {
  const Wavefunction parts[] = {gaussian_packet(grid, offset, 0.0, sigma), gaussian_packet(grid, -offset, 0.0, sigma)};
  const cplx weights[] = {1.0, 1.0};
  return superpose(parts, weights).state;
}

Wavefunction two_slit_state(const PhaseGrid& grid, double separation, double slit_width) {
  return cat_state(grid, 0.5 * separation, slit_width);
}

std::vector<cplx> momentum_amplitudes(const Wavefunction& psi) {
  const PhaseGrid& grid = psi.grid();
  const std::size_t n = grid.size();
  // Phi(p_j) = dx / sqrt(2 pi hbar) sum_k psi_k exp(-i p_j x_k / hbar); the
  // (j - n/2) offset becomes an alternating sign on k.
  std::vector<cplx> phi(n);
  for (std::size_t k = 0; k < n; ++k) phi[k] = (k % 2 == 0 ? 1.0 : -1.0) * psi[k];
  fft::transform(phi, fft::Direction::forward);
  const double scale = grid.dx() / std::sqrt(2.0 * std::numbers::pi * grid.hbar());
  for (std::size_t j = 0; j < n; ++j) {
    const double phase = -grid.p(j) * grid.x_min() / grid.hbar();
    phi[j] *= scale * std::polar(1.0, phase);
  }
  return phi;
}

double fidelity(const Wavefunction& a, const Wavefunction& b) {
  if (!(a.grid() == b.grid())) throw PreconditionError("states", "grid", "grid mismatch");
  cplx overlap{};
  for (std::size_t k = 0; k < a.size(); ++k) overlap += std::conj(a[k]) * b[k];
  return std::abs(overlap) * a.grid().dx();
}

}  // namespace phasespace
