#include "phasespace/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include "phasespace/errors.hpp"
#include "phasespace/fft.hpp"
#include "phasespace/parallel.hpp"

namespace phasespace {
namespace {

constexpr std::size_t kPadFactor = 4;
constexpr std::size_t kRefine = 8;
constexpr double kRollOffStart = 0.8;

void require_square(const PhaseGrid& grid) {
  if (!grid.is_square()) {
    throw PreconditionError("tomography", "grid", "phase-space rotations need a centered grid with dx == dp");
  }
}

std::size_t mirror(std::size_t i, std::size_t n) { return (n - i) % n; }

// F(x, p) <- F(x + a p, p)
void shear_x(std::vector<cplx>& field, const PhaseGrid& grid, double a) {
  const std::size_t n = grid.size();
  fft::transform_columns(field, n, n, fft::Direction::forward);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t l = 0; l < n; ++l) {
    const double k = 2.0 * std::numbers::pi * static_cast<double>(fft::signed_index(l, n)) / grid.length();
    for (std::size_t j = 0; j < n; ++j) {
      const double phase = k * a * grid.p(j);
      field[l * n + j] *= l == n / 2 ? cplx(inv_n * std::cos(phase)) : std::polar(inv_n, phase);
    }
  }
  fft::transform_columns(field, n, n, fft::Direction::backward);
}

// F(x, p) <- F(x, p + b x)
void shear_p(std::vector<cplx>& field, const PhaseGrid& grid, double b) {
  const std::size_t n = grid.size();
  fft::transform_rows(field, n, n, fft::Direction::backward);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double shift = b * grid.x(k);
    for (std::size_t r = 0; r < n; ++r) {
      const double s = static_cast<double>(fft::signed_index(r, n)) * grid.dx();
      const double phase = s * shift / grid.hbar();
      field[k * n + r] *= r == n / 2 ? cplx(inv_n * std::cos(phase)) : std::polar(inv_n, -phase);
    }
  }
  fft::transform_rows(field, n, n, fft::Direction::forward);
}

}  // namespace

double Tomogram::mu(std::size_t f) const { return std::cos(angles.at(f)); }
double Tomogram::nu(std::size_t f) const { return std::sin(angles.at(f)); }

std::vector<double> equispaced_angles(std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t f = 0; f < count; ++f) out[f] = std::numbers::pi * static_cast<double>(f) / static_cast<double>(count);
  return out;
}

WignerFunction rotate_phase_space(const WignerFunction& w, double theta) {
  const PhaseGrid& grid = w.grid();
  require_square(grid);
  const std::size_t n = grid.size();
  const double quarter = 0.5 * std::numbers::pi;
  const long turns = std::lround(theta / quarter);
  const double rest = theta - static_cast<double>(turns) * quarter;

  std::vector<cplx> field(n * n);
  const long q = ((turns % 4) + 4) % 4;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      double v = 0.0;
      switch (q) {
        case 0: v = w(k, j); break;
        case 1: v = w(mirror(j, n), k); break;          // W(-v, u)
        case 2: v = w(mirror(k, n), mirror(j, n)); break;  // W(-u, -v)
        default: v = w(j, mirror(k, n)); break;         // W(v, -u)
      }
      field[k * n + j] = v;
    }
  }
  if (rest != 0.0) {
    // [[c, -s], [s, c]] = Sx(a) Sp(b) Sx(a) with a = -tan(rest/2), b = sin(rest).
    const double a = -std::tan(0.5 * rest);
    const double b = std::sin(rest);
    shear_x(field, grid, a);
    shear_p(field, grid, b);
    shear_x(field, grid, a);
  }
  std::vector<double> values(n * n);
  for (std::size_t i = 0; i < n * n; ++i) values[i] = field[i].real();
  return WignerFunction(grid, std::move(values), w.time());
}

Tomogram forward_tomogram(const WignerFunction& w, std::span<const double> angles) {
  if (angles.empty()) throw PreconditionError("tomography", "angles", "empty angle list");
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (!(angles[i] >= 0.0 && angles[i] < std::numbers::pi)) {
      throw PreconditionError("tomography", "angles", "angle " + std::to_string(angles[i]) + " outside [0, pi)");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (angles[i] == angles[j]) throw PreconditionError("tomography", "angles", "duplicate frame");
    }
  }
  const PhaseGrid& grid = w.grid();
  require_square(grid);
  if (std::abs(w.integral() - 1.0) > 1e-6) throw PreconditionError("tomography", "W", "Wigner function is not normalized");
  const std::size_t n = grid.size();

  Tomogram tomo;
  tomo.angles.assign(angles.begin(), angles.end());
  tomo.X = grid.x_axis();
  tomo.dX = grid.dx();
  tomo.hbar = grid.hbar();
  tomo.values.assign(angles.size() * n, 0.0);
  std::vector<double> lowest(angles.size(), 0.0);

  parallel_for(angles.size(), [&](std::size_t f) {
    const WignerFunction rotated = rotate_phase_space(w, angles[f]);
    for (std::size_t k = 0; k < n; ++k) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) sum += rotated(k, j);
      const double density = sum * grid.dp();
      lowest[f] = std::min(lowest[f], density);
      tomo.values[f * n + k] = std::max(density, 0.0);
    }
  });
  tomo.min_raw = *std::min_element(lowest.begin(), lowest.end());
  return tomo;
}

WignerFunction inverse_tomogram(const Tomogram& tomo, const PhaseGrid& target) {
  const std::size_t frames = tomo.frames();
  if (frames < 2) throw PreconditionError("tomography", "frames", "too few frames for reconstruction (need >= 2)");
  if (frames < 32) {
    std::clog << "warning: tomography: " << frames << " frames; quantitative reconstruction needs >= 32\n";
  }
  const std::size_t m = tomo.X.size();
  if (m == 0 || tomo.values.size() != frames * m) {
    throw PreconditionError("tomography", "values", "tomogram values do not match frames x X");
  }
  const double tau = tomo.dX;
  const std::size_t padded = kPadFactor * m;
  const std::size_t fine = kRefine * padded;
  const std::size_t offset = (padded - m) / 2;
  const double fine_step = tau / static_cast<double>(kRefine);
  const double fine_origin = tomo.X.front() - static_cast<double>(offset) * tau;

  // Ram-Lak kernel sampled on the padded axis, times the roll-off window.
  std::vector<cplx> ramp(padded);
  for (std::size_t i = 0; i < padded; ++i) {
    const long s = fft::signed_index(i, padded);
    if (s == 0) {
      ramp[i] = 1.0 / (4.0 * tau * tau);
    } else if (s % 2 != 0) {
      ramp[i] = -1.0 / (std::numbers::pi * std::numbers::pi * static_cast<double>(s * s) * tau * tau);
    }
  }
  fft::transform(ramp, fft::Direction::forward);
  for (std::size_t l = 0; l < padded; ++l) {
    const double rel = std::abs(static_cast<double>(fft::signed_index(l, padded))) / static_cast<double>(padded / 2);
    double window = 1.0;
    if (rel > kRollOffStart) window = 0.5 * (1.0 + std::cos(std::numbers::pi * (rel - kRollOffStart) / (1.0 - kRollOffStart)));
    ramp[l] = ramp[l].real() * window * tau;
  }

  std::vector<std::vector<double>> filtered(frames);
  parallel_for(frames, [&](std::size_t f) {
    std::vector<cplx> spectrum(padded);
    const auto data = tomo.frame(f);
    for (std::size_t i = 0; i < m; ++i) spectrum[offset + i] = data[i];
    fft::transform(spectrum, fft::Direction::forward);
    std::vector<cplx> refined(fine);
    for (std::size_t l = 0; l < padded; ++l) {
      const cplx v = spectrum[l] * ramp[l];
      const long s = fft::signed_index(l, padded);
      if (l == padded / 2) {
        refined[l] += 0.5 * v;
        refined[fine - padded / 2] += 0.5 * v;
      } else {
        refined[s >= 0 ? static_cast<std::size_t>(s) : fine - static_cast<std::size_t>(-s)] = v;
      }
    }
    fft::transform(refined, fft::Direction::backward);
    std::vector<double> out(fine);
    for (std::size_t i = 0; i < fine; ++i) out[i] = refined[i].real() / static_cast<double>(padded);
    filtered[f] = std::move(out);
  });

  // Quadrature weights in theta: half the gap to each neighbour on the
  // pi-periodic circle.
  std::vector<std::size_t> order(frames);
  for (std::size_t f = 0; f < frames; ++f) order[f] = f;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return tomo.angles[a] < tomo.angles[b]; });
  std::vector<double> weight(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const double prev = i == 0 ? tomo.angles[order.back()] - std::numbers::pi : tomo.angles[order[i - 1]];
    const double next = i + 1 == frames ? tomo.angles[order.front()] + std::numbers::pi : tomo.angles[order[i + 1]];
    weight[order[i]] = 0.5 * (next - prev);
  }

  const std::size_t n = target.size();
  std::vector<double> values(n * n, 0.0);
  parallel_for(n, [&](std::size_t k) {
    const double x = target.x(k);
    for (std::size_t j = 0; j < n; ++j) {
      const double p = target.p(j);
      double acc = 0.0;
      for (std::size_t f = 0; f < frames; ++f) {
        const double X = x * std::cos(tomo.angles[f]) + p * std::sin(tomo.angles[f]);
        const double pos = (X - fine_origin) / fine_step;
        if (pos < 0.0 || pos >= static_cast<double>(fine - 1)) continue;
        const auto i0 = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i0);
        const auto& q = filtered[f];
        acc += weight[f] * ((1.0 - frac) * q[i0] + frac * q[i0 + 1]);
      }
      values[k * n + j] = acc;
    }
  });

  WignerFunction out(target, std::move(values));
  const double total = out.integral();
  if (!(std::abs(total) > 0.0)) throw NumericalError(NumericalError::Monitor::convergence, "tomography: empty reconstruction");
  for (double& v : out.values()) v /= total;
  return out;
}

QuadratureDensity scaled_frame(const Tomogram& tomo, std::size_t frame, double scale) {
  if (!(scale > 0.0)) throw PreconditionError("tomography", "scale", "must be positive");
  QuadratureDensity out;
  const auto data = tomo.frame(frame);
  out.X.reserve(data.size());
  out.density.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.X.push_back(scale * tomo.X[i]);
    out.density.push_back(data[i] / scale);
  }
  return out;
}

}  // namespace phasespace
