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

PhaseGrid grid() { return make_grid(256, -16.0, 16.0); }

std::vector<Wavefunction> battery(const PhaseGrid& g) {
  std::vector<Wavefunction> out{gaussian_packet(g, 0.0, 0.0, std::sqrt(0.5)), gaussian_packet(g, 1.5, -0.5, 1.0),
                                gaussian_packet(g, -2.0, 1.0, 0.6),          gaussian_packet(g, 0.0, 2.0, 1.8),
                                gaussian_packet(g, 3.0, 0.5, 0.8)};
  for (unsigned level = 0; level <= 5; ++level) out.push_back(harmonic_eigenstate(g, level, 1.0));
  out.push_back(cat_state(g, 3.0, std::sqrt(0.5)));
  out.push_back(two_slit_state(g, 4.0, 0.5));
  return out;
}

}  // namespace

TEST_CASE("operator route") {
  const auto g = grid();
  const auto psi = gaussian_packet(g, 1.5, -0.5, 1.0);
  CHECK(std::abs(expectation_operator(psi, Observable::x) - 1.5) < 1e-10);
  CHECK(std::abs(expectation_operator(psi, Observable::p) + 0.5) < 1e-10);
  for (unsigned level = 0; level <= 5; ++level) {
    const auto h = harmonic_eigenstate(g, level, 1.0);
    CHECK(std::abs(expectation_operator(h, Observable::energy, Potential::harmonic(1.0)) - (level + 0.5)) < 1e-8);
  }
  CHECK(std::abs(expectation_operator(harmonic_eigenstate(g, 0, 1.0), Observable::sym_xp)) < 1e-10);
}

TEST_CASE("phase-space route equals the operator route") {
  const auto g = grid();
  const auto psi = gaussian_packet(g, 1.5, -0.5, 1.0);
  const auto w = wigner_transform(psi);
  const std::vector<Monomial> x{{1.0, 1, 0}}, p{{1.0, 0, 1}}, xp{{1.0, 1, 1}};
  CHECK(std::abs(expectation_phase_space(w, x) - 1.5) < 1e-9);
  CHECK(std::abs(expectation_phase_space(w, x) - expectation_operator(psi, Observable::x)) < 1e-9);
  CHECK(std::abs(expectation_phase_space(w, p) + 0.5) < 1e-9);
  const auto ground = harmonic_eigenstate(g, 0, 1.0);
  const double ps = expectation_phase_space(wigner_transform(ground), xp);
  CHECK(std::abs(ps) < 1e-9);
  CHECK(std::abs(ps - expectation_operator(ground, Observable::sym_xp)) < 1e-9);

  const std::vector<Monomial> quintic{{1.0, 3, 2}};
  CHECK_THROWS_AS(expectation_phase_space(w, quintic), PreconditionError);

  for (const auto& s : battery(g)) {
    const auto a = moments(s);
    const auto b = moments(wigner_transform(s));
    CHECK(std::abs(a.mean_x - b.mean_x) < 1e-8);
    CHECK(std::abs(a.mean_p - b.mean_p) < 1e-8);
    CHECK(std::abs(a.var_x - b.var_x) < 1e-8);
    CHECK(std::abs(a.var_p - b.var_p) < 1e-8);
    CHECK(std::abs(a.cov_xp - b.cov_xp) < 1e-8);
  }
}

TEST_CASE("uncertainty products") {
  const auto g = grid();
  const auto m = moments(gaussian_packet(g, 0.0, 0.0, std::sqrt(0.5)));
  CHECK(std::abs(m.uncertainty_product - 0.5) < 1e-8);
  CHECK(std::abs(m.blob_area - 0.5) < 1e-8);
  CHECK(std::abs(moments(harmonic_eigenstate(g, 1, 1.0)).uncertainty_product - 1.5) < 1e-7);
  for (const auto& s : battery(g)) {
    const auto r = moments(s);
    CHECK(r.uncertainty_product >= 0.5 - 1e-9);
    CHECK(r.blob_area >= 0.5 - 1e-9);
    CHECK(r.uncertainty_product >= r.blob_area);
  }
}

TEST_CASE("purity") {
  const auto g = make_grid(128, -12.0, 12.0);
  const auto a = wigner_transform(harmonic_eigenstate(g, 0, 1.0));
  const auto b = wigner_transform(harmonic_eigenstate(g, 1, 1.0));
  CHECK(std::abs(purity(a) - 1.0) < 1e-6);
  std::vector<double> mix(a.values().size());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 0.5 * (a.values()[i] + b.values()[i]);
  CHECK(std::abs(purity(WignerFunction(g, mix)) - 0.5) < 1e-6);
  std::vector<double> doubled(a.values().begin(), a.values().end());
  for (double& v : doubled) v *= 2.0;
  CHECK_THROWS_AS(purity(WignerFunction(g, doubled)), PreconditionError);

  const auto psi = gaussian_packet(g, 1.0, 0.0, std::sqrt(0.5));
  const auto v = Potential::quartic(0.1);
  const auto w0 = wigner_transform(psi);
  CHECK(std::abs(purity(wigner_transform(propagate_schrodinger(psi, v, 1e-3, 500))) - 1.0) < 1e-6);
  CHECK(std::abs(purity(propagate_moyal_exact(w0, v, 1e-3, 500)) - 1.0) < 1e-6);
  const auto z = propagate_characteristic(to_characteristic(w0), v, 1e-3, 500);
  CHECK(std::abs(purity(wigner_transform(factorize_characteristic(z).state)) - 1.0) < 1e-6);
}

TEST_CASE("negativity") {
  const auto g = grid();
  for (const auto& s : {gaussian_packet(g, 0.0, 0.0, 1.0), gaussian_packet(g, 2.0, -1.0, 0.5)}) {
    const auto n = negativity(wigner_transform(s));
    CHECK(n.min_value >= -1e-9);
    CHECK(n.negative_volume <= 1e-9);
  }
  const auto cat = negativity(wigner_transform(cat_state(g, 3.0, std::sqrt(0.5))));
  CHECK(cat.min_value < -0.05);
  CHECK(cat.negative_volume > 0.1);
  const auto w1 = wigner_transform(harmonic_eigenstate(g, 1, 1.0));
  CHECK(std::abs(w1(128, 128) + 1.0 / std::numbers::pi) < 1e-6);
  for (const auto& s : battery(g)) CHECK(negativity(wigner_transform(s)).min_value >= -1.0 / std::numbers::pi - 1e-9);
}

TEST_CASE("classical trajectories") {
  const auto ho = Potential::harmonic(1.0);
  const std::vector<double> half{std::numbers::pi};
  const auto t = classical_trajectory(1.0, 0.0, ho, half, 1e-3);
  CHECK(std::abs(t.back().x + 1.0) < 1e-8);
  CHECK(std::abs(t.back().p) < 1e-8);

  const std::vector<double> three{3.0};
  const auto f = classical_trajectory(0.0, 1.0, Potential::free(), three, 1e-3);
  CHECK(std::abs(f.back().x - 3.0) < 1e-12);
  CHECK(std::abs(f.back().p - 1.0) < 1e-12);

  std::vector<double> periods;
  for (int i = 1; i <= 10; ++i) periods.push_back(2.0 * std::numbers::pi * i);
  const auto run = classical_trajectory(1.0, 0.0, ho, periods, 1e-3);
  for (const auto& pt : run) CHECK(std::abs(0.5 * (pt.x * pt.x + pt.p * pt.p) - 0.5) / 0.5 < 1e-9);
}

TEST_CASE("ehrenfest tracking") {
  const auto g = grid();
  std::vector<double> times;
  for (int i = 0; i <= 10; ++i) times.push_back(0.2 * i);

  SUBCASE("quadratic potential follows the classical orbit") {
    const auto rows = ehrenfest_track(gaussian_packet(g, 2.0, 0.5, 0.9), Potential::harmonic(1.0), times, 1e-3);
    for (const auto& r : rows) {
      CHECK(std::abs(r.mean_x - r.classical_x) < 1e-6);
      CHECK(std::abs(r.mean_p - r.classical_p) < 1e-6);
      CHECK(std::abs(r.mean_force - r.force_at_mean) < 1e-6);
    }
  }
  SUBCASE("finite-difference residuals shrink as dt squared") {
    const auto psi = gaussian_packet(g, 1.5, 0.0, 1.0);
    const auto v = Potential::quartic(0.1);
    const std::vector<double> probe{0.5};
    std::vector<double> residuals;
    for (double dt : {1e-2, 5e-3, 2.5e-3}) {
      const auto r = ehrenfest_track(psi, v, probe, dt).front();
      REQUIRE(r.has_residuals);
      residuals.push_back(r.position_residual);
    }
    const double c = residuals[0] / 1e-4;
    CHECK(residuals[1] < c * 2.5e-5 * 1.2);
    CHECK(residuals[2] < c * 6.25e-6 * 1.2);
  }
}
