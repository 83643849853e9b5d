#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "phasespace/dynamics.hpp"
#include "phasespace/errors.hpp"
#include "phasespace/observables.hpp"
#include "phasespace/states.hpp"
#include "phasespace/wigner.hpp"

using namespace phasespace;

namespace {

// min over global phase of sqrt(sum |a - e^{i phi} b|^2 dx)
double distance_up_to_phase(const Wavefunction& a, const Wavefunction& b) {
  cplx overlap = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) overlap += std::conj(b[k]) * a[k];
  const cplx phase = overlap / std::abs(overlap);
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += std::norm(a[k] - phase * b[k]);
  return std::sqrt(sum * a.grid().dx());
}

// W of the coherent state of a unit harmonic well, analytically rotated.
WignerFunction coherent_wigner(const PhaseGrid& g, double xc, double pc) {
  std::vector<double> v(g.size() * g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double dx = g.x(k) - xc, dp = g.p(j) - pc;
      v[k * g.size() + j] = std::exp(-dx * dx - dp * dp) / std::numbers::pi;
    }
  }
  return WignerFunction(g, v);
}

const std::vector<Potential>& catalog() {
  static const std::vector<Potential> list{Potential::harmonic(1.0), Potential::quartic(0.1),
                                           Potential::double_well(-1.0, 0.1)};
  return list;
}

}  // namespace

TEST_CASE("coherent state returns after one harmonic period") {
  const auto g = make_grid(128, -12.0, 12.0);
  const auto psi0 = gaussian_packet(g, 2.0, 0.0, std::sqrt(0.5));
  const std::size_t steps = 6000;
  const auto psi = propagate_schrodinger(psi0, Potential::harmonic(1.0), 2.0 * std::numbers::pi / steps, steps);
  CHECK(distance_up_to_phase(psi, psi0) < 1e-6);
}

TEST_CASE("free packet drifts at its momentum") {
  const auto g = make_grid(256, -20.0, 20.0);
  const auto psi = propagate_schrodinger(gaussian_packet(g, 0.0, 1.0, 1.0), Potential::free(), 1e-3, 2000);
  CHECK(std::abs(expectation_operator(psi, Observable::x) - 2.0) < 1e-8);
}

TEST_CASE("nonpositive step is rejected") {
  const auto g = make_grid(64, -8.0, 8.0);
  const auto psi = gaussian_packet(g, 0.0, 0.0, 1.0);
  CHECK_THROWS_AS(propagate_schrodinger(psi, Potential::free(), 0.0, 1), PreconditionError);
  CHECK_THROWS_AS(propagate_moyal_exact(wigner_transform(psi), Potential::free(), -1e-3, 1), PreconditionError);
}

TEST_CASE("momentum beyond the band trips the monitor") {
  const auto g = make_grid(64, -8.0, 8.0);
  const double p0 = 0.8 * g.p_nyquist();
  const auto psi = gaussian_packet(g, 0.0, p0, 1.0);
  CHECK_THROWS_AS(propagate_schrodinger(psi, Potential::free(), 1e-3, 10), NumericalError);
}

TEST_CASE("zero steps are the identity") {
  const auto g = make_grid(64, -8.0, 8.0);
  const auto psi = gaussian_packet(g, 0.5, 0.5, 1.0);
  const auto w = wigner_transform(psi);
  const auto z = to_characteristic(w);
  const auto v = Potential::quartic(0.1);
  const auto psi1 = propagate_schrodinger(psi, v, 1e-3, 0);
  CHECK(std::equal(psi1.samples().begin(), psi1.samples().end(), psi.samples().begin()));
  const auto w1 = propagate_moyal_exact(w, v, 1e-3, 0);
  CHECK(std::equal(w1.values().begin(), w1.values().end(), w.values().begin()));
  const auto w2 = propagate_moyal_truncated(w, v, 1e-3, 0, 1);
  CHECK(std::equal(w2.values().begin(), w2.values().end(), w.values().begin()));
  const auto z1 = propagate_characteristic(z, v, 1e-3, 0);
  CHECK(std::equal(z1.values().begin(), z1.values().end(), z.values().begin()));
}

TEST_CASE("exact Moyal in a harmonic well is a rigid rotation") {
  const auto g = make_grid(128, -12.0, 12.0);
  const auto w0 = wigner_transform(gaussian_packet(g, 2.0, 0.0, std::sqrt(0.5)));
  const double t = 0.5 * std::numbers::pi;
  const auto w = propagate_moyal_exact(w0, Potential::harmonic(1.0), t / 1500.0, 1500);
  CHECK(l2_distance(w, coherent_wigner(g, 2.0 * std::cos(t), -2.0 * std::sin(t))) < 1e-6);

  const auto stationary = wigner_transform(harmonic_eigenstate(g, 2, 1.0));
  CHECK(l2_distance(propagate_moyal_exact(stationary, Potential::harmonic(1.0), 1e-3, 1000), stationary) < 1e-6);
}

TEST_CASE("exact Moyal matches the wavefunction route in a quartic well") {
  const auto g = make_grid(128, -10.0, 10.0);
  const auto psi = gaussian_packet(g, 1.0, 0.0, std::sqrt(0.5));
  const auto v = Potential::quartic(0.1);
  const auto a = wigner_transform(propagate_schrodinger(psi, v, 1e-3, 1000));
  const auto b = propagate_moyal_exact(wigner_transform(psi), v, 1e-3, 1000);
  CHECK(l2_distance(a, b) < 1e-6);
}

TEST_CASE("truncated series") {
  const auto g = make_grid(128, -10.0, 10.0);
  const auto w0 = wigner_transform(gaussian_packet(g, 1.0, 0.0, std::sqrt(0.5)));

  SUBCASE("harmonic well is independent of the truncation order") {
    const auto v = Potential::harmonic(1.0);
    const auto a = propagate_moyal_truncated(w0, v, 1e-3, 200, 0);
    const auto b = propagate_moyal_truncated(w0, v, 1e-3, 200, 3);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
    CHECK(worst < 1e-12);
  }
  SUBCASE("quartic series terminates at first order") {
    const auto v = Potential::quartic(0.1);
    const auto exact = propagate_moyal_exact(w0, v, 1e-3, 500);
    CHECK(l2_distance(propagate_moyal_truncated(w0, v, 1e-3, 500, 1), exact) < 1e-5);
  }
}

TEST_CASE("characteristic kernel follows the wavefunction") {
  const auto g = make_grid(256, -12.0, 12.0);
  const auto psi = gaussian_packet(g, 1.0, 0.5, std::sqrt(0.5));
  for (const auto& v : catalog()) {
    CAPTURE(v.describe());
    const auto z = propagate_characteristic(to_characteristic(wigner_transform(psi)), v, 1e-3, 1000);
    const auto oracle = to_characteristic(wigner_transform(propagate_schrodinger(psi, v, 1e-3, 1000)));
    double worst = 0.0, negative = 0.0;
    for (std::size_t i = 0; i < z.values().size(); ++i) worst = std::max(worst, std::abs(z.values()[i] - oracle.values()[i]));
    for (std::size_t a = 0; a < g.size(); ++a) negative = std::min(negative, z(a, a).real());
    CHECK(worst < 1e-7);
    CHECK(negative >= -1e-10);
    CHECK(z.hermiticity_deviation() < 1e-10);
    CHECK(std::abs(z.trace() - 1.0) < 1e-9);
  }
}

TEST_CASE("norm conservation over ten thousand steps") {
  const auto g = make_grid(128, -10.0, 10.0);
  const auto psi = gaussian_packet(g, 1.0, 0.0, std::sqrt(0.5));
  const auto v = Potential::double_well(-1.0, 0.1);
  const std::size_t steps = 10000;
  CHECK(std::abs(propagate_schrodinger(psi, v, 1e-3, steps).norm_squared() - 1.0) < 1e-9);
  const auto w = wigner_transform(psi);
  CHECK(std::abs(propagate_moyal_exact(w, v, 1e-3, steps).integral() - w.integral()) < 1e-9);
  CHECK(std::abs(propagate_characteristic(to_characteristic(w), v, 1e-3, steps).trace() - 1.0) < 1e-9);
}

TEST_CASE("energy conservation") {
  // Strang keeps a modified Hamiltonian; the O(dt^2) offset of <H> stays
  // below 1e-7 relative at dt = 5e-4.
  const auto g = make_grid(256, -12.0, 12.0);
  const auto psi = gaussian_packet(g, 1.0, 0.0, std::sqrt(0.5));
  for (const auto& v : catalog()) {
    CAPTURE(v.describe());
    const double e0 = expectation_operator(psi, Observable::energy, v);
    const auto a = propagate_schrodinger(psi, v, 5e-4, 2000);
    CHECK(std::abs(expectation_operator(a, Observable::energy, v) - e0) / std::abs(e0) < 1e-7);
    const auto w0 = wigner_transform(psi);
    const double f0 = phase_space_energy(w0, v);
    const auto b = propagate_moyal_exact(w0, v, 5e-4, 2000);
    CHECK(std::abs(phase_space_energy(b, v) - f0) / std::abs(f0) < 1e-7);
  }
}

TEST_CASE("split-step is second order") {
  const auto g = make_grid(128, -10.0, 10.0);
  const auto psi = gaussian_packet(g, 1.0, 0.0, std::sqrt(0.5));
  const auto v = Potential::quartic(0.1);
  const auto reference = propagate_schrodinger(psi, v, 1.25e-3, 800);
  auto error = [&](double dt, std::size_t steps) {
    const auto s = propagate_schrodinger(psi, v, dt, steps);
    double sum = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) sum += std::norm(s[k] - reference[k]);
    return std::sqrt(sum * g.dx());
  };
  const double coarse = error(2e-2, 50);
  const double fine = error(1e-2, 100);
  CHECK(coarse / fine >= 3.5);
}

TEST_CASE("cross validation") {
  // The phase-space grid holds half the momentum band of the wavefunction.
  const auto g = make_grid(256, -12.0, 12.0);
  const auto psi = gaussian_packet(g, 2.0, 0.0, std::sqrt(0.5));

  SUBCASE("no samples gives an empty report") {
    CHECK(cross_validate(psi, Potential::harmonic(1.0), 1.0, 1e-3, {}).rows.empty());
  }
  SUBCASE("harmonic period") {
    const std::size_t steps = 6000;
    const double dt = 2.0 * std::numbers::pi / steps;
    std::vector<double> samples;
    for (std::size_t i = 0; i <= 4; ++i) samples.push_back(dt * static_cast<double>(i * steps / 4));
    const auto report = cross_validate(psi, Potential::harmonic(1.0), dt * steps, dt, samples);
    REQUIRE(report.rows.size() == samples.size());
    CHECK(report.max_discrepancy() < 1e-6);
    CHECK(report.max_factorization_residual() < 1e-9);
    CHECK_FALSE(report.boundary_flagged());
  }
  SUBCASE("quartic") {
    const std::vector<double> samples{0.0, 0.5, 1.0};
    const auto report = cross_validate(psi, Potential::quartic(0.1), 1.0, 1e-3, samples);
    for (const auto& row : report.rows) {
      CHECK(row.ab < 1e-5);
      CHECK(row.ab >= 0.0);
    }
  }
  SUBCASE("sample times must be multiples of dt inside the horizon") {
    const std::vector<double> off{0.00105};
    CHECK_THROWS_AS(cross_validate(psi, Potential::harmonic(1.0), 1.0, 1e-3, off), PreconditionError);
    const std::vector<double> late{2.0};
    CHECK_THROWS_AS(cross_validate(psi, Potential::harmonic(1.0), 1.0, 1e-3, late), PreconditionError);
  }
}

TEST_CASE("boundary monitor flags edge density") {
  const auto g = make_grid(128, -10.0, 10.0);
  const auto psi = gaussian_packet(g, 4.0, 0.0, 1.0);
  const std::vector<double> samples{0.0};
  const auto report = cross_validate(psi, Potential::free(), 0.0, 1e-3, samples);
  CHECK(report.rows.front().boundary > kBoundaryFlag);
  CHECK(report.boundary_flagged());
}
