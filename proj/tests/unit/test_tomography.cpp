#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "phasespace/errors.hpp"
#include "phasespace/observables.hpp"
#include "phasespace/states.hpp"
#include "phasespace/tomography.hpp"
#include "phasespace/wigner.hpp"

using namespace phasespace;

namespace {

const PhaseGrid& square() {
  static const PhaseGrid g = make_square_grid(128);
  return g;
}

double relative_l2(const WignerFunction& a, const WignerFunction& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    num += std::pow(a.values()[i] - b.values()[i], 2);
    den += std::pow(b.values()[i], 2);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("axis-aligned frames are the marginals") {
  const auto w = wigner_transform(cat_state(square(), 2.5, std::sqrt(0.5)));
  const std::vector<double> angles{0.0, 0.5 * std::numbers::pi};
  const auto tomo = forward_tomogram(w, angles);
  const auto mx = marginal_position(w);
  const auto mp = marginal_momentum(w);
  double gap_x = 0.0, gap_p = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    gap_x = std::max(gap_x, std::abs(tomo.frame(0)[i] - mx[i]));
    gap_p = std::max(gap_p, std::abs(tomo.frame(1)[i] - mp[i]));
  }
  CHECK(gap_x < 1e-7);
  CHECK(gap_p < 1e-7);
}

TEST_CASE("ground state looks the same from every angle") {
  const auto w = wigner_transform(harmonic_eigenstate(square(), 0, 1.0));
  const std::vector<double> angles{0.0, std::numbers::pi / 6.0, std::numbers::pi / 3.0};
  const auto tomo = forward_tomogram(w, angles);
  double worst = 0.0;
  for (std::size_t f = 1; f < 3; ++f) {
    for (std::size_t i = 0; i < tomo.X.size(); ++i) worst = std::max(worst, std::abs(tomo.frame(f)[i] - tomo.frame(0)[i]));
  }
  CHECK(worst < 1e-6);
  for (std::size_t i = 0; i < tomo.X.size(); ++i) {
    CHECK(std::abs(tomo.frame(1)[i] - std::exp(-tomo.X[i] * tomo.X[i]) / std::sqrt(std::numbers::pi)) < 1e-6);
  }
}

TEST_CASE("frame normalization, positivity and quadrature means") {
  const auto& g = square();
  const std::vector<Wavefunction> states{gaussian_packet(g, 2.0, 1.0, std::sqrt(0.5)), gaussian_packet(g, -1.0, 0.5, 1.2),
                                         harmonic_eigenstate(g, 3, 1.0), cat_state(g, 2.5, std::sqrt(0.5)),
                                         two_slit_state(g, 3.0, 0.5)};
  const auto angles = equispaced_angles(24);
  for (const auto& psi : states) {
    const auto w = wigner_transform(psi);
    const auto m = moments(w);
    const auto tomo = forward_tomogram(w, angles);
    CHECK(tomo.min_raw >= -1e-7);
    for (std::size_t f = 0; f < tomo.frames(); ++f) {
      double total = 0.0, mean = 0.0;
      for (std::size_t i = 0; i < tomo.X.size(); ++i) {
        total += tomo.frame(f)[i] * tomo.dX;
        mean += tomo.X[i] * tomo.frame(f)[i] * tomo.dX;
      }
      CHECK(std::abs(total - 1.0) < 1e-6);
      CHECK(std::abs(mean - (tomo.mu(f) * m.mean_x + tomo.nu(f) * m.mean_p)) < 1e-7);
    }
  }
}

TEST_CASE("quarter turns are exact") {
  const auto w = wigner_transform(gaussian_packet(square(), 1.5, -0.5, 0.9));
  auto r = w;
  for (int i = 0; i < 4; ++i) r = rotate_phase_space(r, 0.5 * std::numbers::pi);
  CHECK(std::equal(r.values().begin(), r.values().end(), w.values().begin()));
}

TEST_CASE("filtered back-projection") {
  const auto& g = square();
  const auto angles = equispaced_angles(180);

  SUBCASE("ground state") {
    const auto w = wigner_transform(harmonic_eigenstate(g, 0, 1.0));
    const auto rec = inverse_tomogram(forward_tomogram(w, angles), g);
    CHECK(relative_l2(rec, w) < 1e-3);
    CHECK(std::abs(rec.integral() - 1.0) < 1e-12);
  }
  SUBCASE("cat negativity survives") {
    const auto w = wigner_transform(cat_state(g, 2.5, std::sqrt(0.5)));
    const auto rec = inverse_tomogram(forward_tomogram(w, angles), g);
    double lowest = 0.0;
    for (double v : rec.values()) lowest = std::min(lowest, v);
    CHECK(lowest < -0.04);
  }
  SUBCASE("forward after inverse reproduces the tomogram") {
    const auto w = wigner_transform(gaussian_packet(g, 1.0, -1.0, 0.8));
    const auto tomo = forward_tomogram(w, angles);
    const auto again = forward_tomogram(inverse_tomogram(tomo, g), angles);
    for (std::size_t f = 0; f < tomo.frames(); f += 15) {
      double sum = 0.0;
      for (std::size_t i = 0; i < tomo.X.size(); ++i) sum += std::pow(again.frame(f)[i] - tomo.frame(f)[i], 2);
      CHECK(std::sqrt(sum * tomo.dX) < 1e-3);
    }
  }
}

TEST_CASE("preconditions") {
  const auto w = wigner_transform(gaussian_packet(square(), 0.0, 0.0, 1.0));
  CHECK_THROWS_AS(forward_tomogram(w, std::vector<double>{}), PreconditionError);
  CHECK_THROWS_AS(forward_tomogram(w, std::vector<double>{std::numbers::pi}), PreconditionError);
  CHECK_THROWS_AS(forward_tomogram(w, std::vector<double>{-0.1}), PreconditionError);
  CHECK_THROWS_AS(forward_tomogram(w, std::vector<double>{0.3, 0.3}), PreconditionError);
  const auto one = forward_tomogram(w, std::vector<double>{0.0});
  CHECK_THROWS_AS(inverse_tomogram(one, square()), PreconditionError);

  const auto rect = make_grid(128, -10.0, 10.0);
  CHECK_THROWS_AS(forward_tomogram(wigner_transform(gaussian_packet(rect, 0.0, 0.0, 1.0)), std::vector<double>{0.0}),
                  PreconditionError);
}

TEST_CASE("scaled frames by rescaling X") {
  const auto w = wigner_transform(gaussian_packet(square(), 1.0, 0.0, 1.0));
  const auto tomo = forward_tomogram(w, std::vector<double>{0.0});
  const auto scaled = scaled_frame(tomo, 0, 2.0);
  double total = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < scaled.X.size(); ++i) {
    total += scaled.density[i] * 2.0 * tomo.dX;
    mean += scaled.X[i] * scaled.density[i] * 2.0 * tomo.dX;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(mean == doctest::Approx(2.0).epsilon(1e-7));
  CHECK_THROWS_AS(scaled_frame(tomo, 0, 0.0), PreconditionError);
}
