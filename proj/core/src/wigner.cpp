#include "phasespace/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "phasespace/errors.hpp"
#include "phasespace/fft.hpp"
#include "phasespace/parallel.hpp"

namespace phasespace {
namespace {

constexpr double kImaginaryResidueLimit = 1e-12;

double alternating(std::size_t r) { return r % 2 == 0 ? 1.0 : -1.0; }

std::size_t wrap(long index, std::size_t n) {
  const long m = static_cast<long>(n);
  return static_cast<std::size_t>(((index % m) + m) % m);
}

// Trigonometric interpolation of a periodic sequence onto twice as many
// points. Even output samples reproduce the input exactly.
std::vector<cplx> upsample_twice(std::span<const cplx> in) {
  const std::size_t n = in.size();
  std::vector<cplx> spectrum(in.begin(), in.end());
  fft::transform(spectrum, fft::Direction::forward);
  std::vector<cplx> padded(2 * n);
  for (std::size_t l = 0; l < n / 2; ++l) padded[l] = spectrum[l];
  for (std::size_t l = n / 2 + 1; l < n; ++l) padded[l + n] = spectrum[l];
  padded[n / 2] = 0.5 * spectrum[n / 2];
  padded[n / 2 + n] = 0.5 * spectrum[n / 2];
  fft::transform(padded, fft::Direction::backward);
  const double scale = 1.0 / static_cast<double>(n);
  for (cplx& v : padded) v *= scale;
  for (std::size_t k = 0; k < n; ++k) padded[2 * k] = in[k];
  return padded;
}

// Correlation field on the half-spacing midpoint axis: 2n rows (x_min + c dx/2)
// by n columns (separation index r in FFT order).
std::vector<cplx> upsampled_correlation(const WignerFunction& w) {
  const std::size_t n = w.grid().size();
  CorrelationField c = correlation_field(w);
  fft::transform_columns(c.values, n, n, fft::Direction::forward);
  std::vector<cplx> padded(2 * n * n);
  for (std::size_t l = 0; l < n; ++l) {
    std::size_t target;
    double weight = 1.0;
    if (l < n / 2) {
      target = l;
    } else if (l > n / 2) {
      target = l + n;
    } else {
      target = l;
      weight = 0.5;
    }
    for (std::size_t r = 0; r < n; ++r) padded[target * n + r] = weight * c.values[l * n + r];
    if (l == n / 2) {
      for (std::size_t r = 0; r < n; ++r) padded[(l + n) * n + r] = weight * c.values[l * n + r];
    }
  }
  fft::transform_columns(padded, 2 * n, n, fft::Direction::backward);
  const double scale = 1.0 / static_cast<double>(n);
  for (cplx& v : padded) v *= scale;
  // Restore the original midpoints bit-exactly.
  CorrelationField exact = correlation_field(w);
  for (std::size_t k = 0; k < n; ++k) {
    std::copy_n(exact.values.begin() + static_cast<long>(k * n), n, padded.begin() + static_cast<long>(2 * k * n));
  }
  return padded;
}

}  // namespace

WignerFunction::WignerFunction(PhaseGrid grid, std::vector<double> values, double t)
    : grid_(std::move(grid)), values_(std::move(values)), t_(t) {
  if (values_.size() != grid_.size() * grid_.size()) {
    throw PreconditionError("wigner", "values", "field size does not match n x n grid");
  }
}

double WignerFunction::integral() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum * grid_.dx() * grid_.dp();
}

CharacteristicZ::CharacteristicZ(PhaseGrid grid, std::vector<cplx> values, double t)
    : grid_(std::move(grid)), values_(std::move(values)), t_(t) {
  if (values_.size() != grid_.size() * grid_.size()) {
    throw PreconditionError("wigner", "values", "kernel size does not match n x n grid");
  }
}

double CharacteristicZ::trace() const {
  const std::size_t n = grid_.size();
  double sum = 0.0;
  for (std::size_t a = 0; a < n; ++a) sum += values_[a * n + a].real();
  return sum * grid_.dx();
}

double CharacteristicZ::hermiticity_deviation() const {
  const std::size_t n = grid_.size();
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      worst = std::max(worst, std::abs(values_[a * n + b] - std::conj(values_[b * n + a])));
    }
  }
  return worst;
}

WignerTransform wigner_transform_checked(const Wavefunction& psi) {
  const PhaseGrid& grid = psi.grid();
  const std::size_t n = grid.size();
  if (std::abs(psi.norm_squared() - 1.0) > kNormTolerance) {
    throw PreconditionError("wigner", "psi", "input wavefunction is not normalized");
  }
  const std::vector<cplx> fine = upsample_twice(psi.samples());
  std::vector<cplx> field(n * n);
  parallel_for(n, [&](std::size_t k) {
    cplx* row = field.data() + k * n;
    const long centre = static_cast<long>(2 * k);
    const long reach = std::min(centre, static_cast<long>(2 * n - 1) - centre);
    for (long m = -reach; m <= reach; ++m) {
      row[wrap(m, n)] += std::conj(fine[static_cast<std::size_t>(centre - m)]) * fine[static_cast<std::size_t>(centre + m)];
    }
    for (std::size_t r = 0; r < n; ++r) row[r] *= alternating(r);
  });
  fft::transform_rows(field, n, n, fft::Direction::forward);

  const double scale = grid.dx() / (2.0 * std::numbers::pi * grid.hbar());
  std::vector<double> values(n * n);
  double residue = 0.0;
  for (std::size_t i = 0; i < n * n; ++i) {
    values[i] = scale * field[i].real();
    residue = std::max(residue, std::abs(scale * field[i].imag()));
  }
  if (residue > kImaginaryResidueLimit) {
    throw NumericalError(NumericalError::Monitor::residue,
                         "wigner: imaginary residue " + std::to_string(residue) + " exceeds 1e-12");
  }
  return {WignerFunction(grid, std::move(values), psi.time()), residue};
}

WignerFunction wigner_transform(const Wavefunction& psi) { return wigner_transform_checked(psi).wigner; }

std::vector<double> marginal_position(const WignerFunction& w) {
  const std::size_t n = w.grid().size();
  std::vector<double> density(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += w(k, j);
    density[k] = sum * w.grid().dp();
  }
  return density;
}

std::vector<double> marginal_momentum(const WignerFunction& w) {
  const std::size_t n = w.grid().size();
  std::vector<double> density(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) density[j] += w(k, j);
  }
  for (double& d : density) d *= w.grid().dx();
  return density;
}

CorrelationField correlation_field(const WignerFunction& w) {
  const std::size_t n = w.grid().size();
  std::vector<cplx> values(w.values().begin(), w.values().end());
  fft::transform_rows(values, n, n, fft::Direction::backward);
  const double dp = w.grid().dp();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t r = 0; r < n; ++r) values[k * n + r] *= alternating(r) * dp;
  }
  return {w.grid(), std::move(values)};
}

WignerFunction wigner_from_correlation(const CorrelationField& c, double t) {
  const std::size_t n = c.grid.size();
  std::vector<cplx> field(c.values);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t r = 0; r < n; ++r) field[k * n + r] *= alternating(r);
  }
  fft::transform_rows(field, n, n, fft::Direction::forward);
  const double scale = c.grid.dx() / (2.0 * std::numbers::pi * c.grid.hbar());
  std::vector<double> values(n * n);
  for (std::size_t i = 0; i < n * n; ++i) values[i] = scale * field[i].real();
  return WignerFunction(c.grid, std::move(values), t);
}

CharacteristicZ to_characteristic(const WignerFunction& w) {
  const std::size_t n = w.grid().size();
  const std::vector<cplx> fine = upsampled_correlation(w);
  const long half = static_cast<long>(n / 2);
  std::vector<cplx> z(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const long sep = static_cast<long>(a) - static_cast<long>(b);
      if (sep >= half || sep <= -half) continue;
      z[a * n + b] = fine[(a + b) * n + wrap(sep, n)];
    }
  }
  return CharacteristicZ(w.grid(), std::move(z), w.time());
}

Wavefunction reconstruct_wavefunction(const WignerFunction& w) {
  const PhaseGrid& grid = w.grid();
  const std::size_t n = grid.size();
  double sum_sq = 0.0;
  for (double v : w.values()) sum_sq += v * v;
  const double purity = 2.0 * std::numbers::pi * grid.hbar() * sum_sq * grid.dx() * grid.dp();
  if (purity < kPurityGate) {
    throw PreconditionError("wigner", "W", "purity " + std::to_string(purity) + " below the pure-state gate 0.999");
  }
  const std::vector<double> density = marginal_position(w);
  const auto anchor_it = std::max_element(density.begin(), density.end());
  if (*anchor_it < 1e-6) throw PreconditionError("wigner", "W", "position marginal maximum below 1e-6 (empty state)");
  const std::size_t anchor = static_cast<std::size_t>(anchor_it - density.begin());

  const std::vector<cplx> fine = upsampled_correlation(w);
  const long half = static_cast<long>(n / 2);
  std::vector<cplx> samples(n);
  for (std::size_t y = 0; y < n; ++y) {
    const long sep = static_cast<long>(y) - static_cast<long>(anchor);
    if (sep >= half || sep <= -half) continue;
    samples[y] = fine[(y + anchor) * n + wrap(sep, n)];
  }
  const cplx pivot = samples[anchor];
  const cplx phase = std::conj(pivot) / std::abs(pivot);
  for (cplx& v : samples) v *= phase;
  samples[anchor] = samples[anchor].real();
  return Wavefunction(grid, std::move(samples), w.time()).normalized();
}

Factorization factorize_characteristic(const CharacteristicZ& z, std::size_t max_iterations) {
  const PhaseGrid& grid = z.grid();
  const std::size_t n = grid.size();
  const double dx = grid.dx();

  std::size_t pivot = 0;
  for (std::size_t a = 1; a < n; ++a) {
    if (z(a, a).real() > z(pivot, pivot).real()) pivot = a;
  }
  const double trace = z.trace();
  if (!(z(pivot, pivot).real() > 0.0) || !(trace > 0.0)) {
    throw NumericalError(NumericalError::Monitor::convergence, "factorize: kernel has no positive diagonal; power iteration cannot start");
  }

  auto l2 = [dx](std::span<const cplx> v) {
    double s = 0.0;
    for (const cplx& c : v) s += std::norm(c);
    return std::sqrt(s * dx);
  };

  std::vector<cplx> v(n);
  for (std::size_t a = 0; a < n; ++a) v[a] = z(a, pivot);
  double norm = l2(v);
  for (cplx& c : v) c /= norm;

  std::vector<cplx> next(n);
  double eigenvalue = 0.0;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    parallel_for(n, [&](std::size_t a) {
      cplx acc{};
      const cplx* row = z.values().data() + a * n;
      for (std::size_t b = 0; b < n; ++b) acc += row[b] * v[b];
      next[a] = acc * dx;
    });
    cplx rayleigh{};
    for (std::size_t a = 0; a < n; ++a) rayleigh += std::conj(v[a]) * next[a];
    const double estimate = rayleigh.real() * dx;
    norm = l2(next);
    if (!(norm > 0.0)) {
      throw NumericalError(NumericalError::Monitor::convergence, "factorize: iterate collapsed to zero");
    }
    for (std::size_t a = 0; a < n; ++a) v[a] = next[a] / norm;
    if (it > 1 && std::abs(estimate - eigenvalue) <= 1e-12 * std::abs(estimate)) {
      eigenvalue = estimate;
      const cplx phase = std::conj(v[pivot]) / std::abs(v[pivot]);
      for (cplx& c : v) c *= phase;
      v[pivot] = v[pivot].real();
      Wavefunction state = Wavefunction(grid, std::move(v), z.time()).normalized();
      return {std::move(state), 1.0 - eigenvalue / trace, eigenvalue, it};
    }
    eigenvalue = estimate;
  }
  throw NumericalError(NumericalError::Monitor::convergence,
                       "factorize: power iteration did not converge in " + std::to_string(max_iterations) + " iterations");
}

}  // namespace phasespace
