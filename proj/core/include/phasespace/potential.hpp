#pragma once

#include <string>
#include <vector>

namespace phasespace {

/// Time-independent polynomial potential. Every variant reduces to
/// coefficients c_0..c_K of V(x) = sum c_i x^i, so derivatives of any
/// order are exact and vanish above the degree.
///
/// The harmonic variant is V = m omega^2 x^2 / 2 and needs the particle
/// mass, which is why the evaluation methods take it explicitly.
class Potential {
 public:
  enum class Kind { harmonic, quartic, double_well, polynomial };

  static Potential harmonic(double omega);
  /// V = lambda x^4
  static Potential quartic(double lambda);
  /// V = a x^2 + b x^4 with a < 0 < b.
  static Potential double_well(double a, double b);
  static Potential polynomial(std::vector<double> coefficients);
  static Potential free() { return polynomial({}); }

  Kind kind() const noexcept { return kind_; }
  const std::vector<double>& parameters() const noexcept { return params_; }

  std::vector<double> coefficients(double mass) const;
  std::size_t degree(double mass) const;
  double value(double x, double mass) const;
  /// d^order V / dx^order at x.
  double derivative(double x, unsigned order, double mass) const;
  double force(double x, double mass) const { return -derivative(x, 1, mass); }

  std::string describe() const;

 private:
  Potential(Kind kind, std::vector<double> params) : kind_(kind), params_(std::move(params)) {}

  Kind kind_;
  std::vector<double> params_;
};

}  // namespace phasespace
