#include <doctest.h>

#include <cmath>

#include "phasespace/errors.hpp"
#include "phasespace/potential.hpp"

using namespace phasespace;

TEST_CASE("harmonic values and derivatives") {
  const auto v = Potential::harmonic(2.0);
  const double m = 1.5;
  for (double x : {-1.3, 0.0, 0.7, 2.9}) {
    CHECK(v.value(x, m) == doctest::Approx(0.5 * m * 4.0 * x * x));
    CHECK(v.derivative(x, 1, m) == doctest::Approx(m * 4.0 * x));
    CHECK(v.derivative(x, 2, m) == doctest::Approx(m * 4.0));
    CHECK(v.derivative(x, 3, m) == 0.0);
    CHECK(v.force(x, m) == doctest::Approx(-m * 4.0 * x));
  }
  CHECK(v.degree(m) == 2);
}

TEST_CASE("quartic and double well derivatives are exact") {
  const auto q = Potential::quartic(0.1);
  const auto w = Potential::double_well(-1.0, 0.1);
  for (double x : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
    CHECK(q.value(x, 1.0) == doctest::Approx(0.1 * std::pow(x, 4)));
    CHECK(q.derivative(x, 1, 1.0) == doctest::Approx(0.4 * std::pow(x, 3)));
    CHECK(q.derivative(x, 3, 1.0) == doctest::Approx(2.4 * x));
    CHECK(q.derivative(x, 4, 1.0) == doctest::Approx(2.4));
    CHECK(q.derivative(x, 5, 1.0) == 0.0);
    CHECK(w.value(x, 1.0) == doctest::Approx(-x * x + 0.1 * std::pow(x, 4)));
    CHECK(w.derivative(x, 1, 1.0) == doctest::Approx(-2.0 * x + 0.4 * std::pow(x, 3)));
    CHECK(w.derivative(x, 0, 1.0) == doctest::Approx(w.value(x, 1.0)));
  }
}

TEST_CASE("general polynomial derivatives of every order") {
  const auto v = Potential::polynomial({1.0, -2.0, 0.5, 3.0, 0.0, 0.25});
  const double x = 1.7;
  CHECK(v.derivative(x, 5, 1.0) == doctest::Approx(0.25 * 120.0));
  CHECK(v.derivative(x, 4, 1.0) == doctest::Approx(0.25 * 120.0 * x));
  CHECK(v.derivative(x, 3, 1.0) == doctest::Approx(3.0 * 6.0 + 0.25 * 60.0 * x * x));
  CHECK(v.derivative(x, 6, 1.0) == 0.0);
  CHECK(v.derivative(x, 40, 1.0) == 0.0);
  CHECK(Potential::free().value(x, 1.0) == 0.0);
}

TEST_CASE("invalid potentials") {
  CHECK_THROWS_AS(Potential::harmonic(0.0), PreconditionError);
  CHECK_THROWS_AS(Potential::quartic(-0.1), PreconditionError);
  CHECK_THROWS_AS(Potential::double_well(1.0, 0.1), PreconditionError);
  CHECK_THROWS_AS(Potential::double_well(-1.0, 0.0), PreconditionError);
}
