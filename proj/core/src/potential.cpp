#include "phasespace/potential.hpp"

#include <cmath>
#include <sstream>

#include "phasespace/errors.hpp"

namespace phasespace {

Potential Potential::harmonic(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw PreconditionError("dynamics", "omega", "must be positive");
  return Potential(Kind::harmonic, {omega});
}

Potential Potential::quartic(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw PreconditionError("dynamics", "lambda", "must be positive");
  return Potential(Kind::quartic, {lambda});
}

Potential Potential::double_well(double a, double b) {
  if (!(a < 0.0) || !std::isfinite(a)) throw PreconditionError("dynamics", "a", "quadratic coefficient must be negative");
  if (!(b > 0.0) || !std::isfinite(b)) throw PreconditionError("dynamics", "b", "quartic coefficient must be positive");
  return Potential(Kind::double_well, {a, b});
}

Potential Potential::polynomial(std::vector<double> coefficients) {
  for (double c : coefficients) {
    if (!std::isfinite(c)) throw PreconditionError("dynamics", "coefficients", "must be finite");
  }
  while (!coefficients.empty() && coefficients.back() == 0.0) coefficients.pop_back();
  return Potential(Kind::polynomial, std::move(coefficients));
}

std::vector<double> Potential::coefficients(double mass) const {
  switch (kind_) {
    case Kind::harmonic:
      return {0.0, 0.0, 0.5 * mass * params_[0] * params_[0]};
    case Kind::quartic:
      return {0.0, 0.0, 0.0, 0.0, params_[0]};
    case Kind::double_well:
      return {0.0, 0.0, params_[0], 0.0, params_[1]};
    case Kind::polynomial:
      return params_;
  }
  return {};
}

std::size_t Potential::degree(double mass) const {
  const auto c = coefficients(mass);
  return c.empty() ? 0 : c.size() - 1;
}

double Potential::value(double x, double mass) const { return derivative(x, 0, mass); }

double Potential::derivative(double x, unsigned order, double mass) const {
  const auto c = coefficients(mass);
  if (order >= c.size()) return 0.0;
  // Horner over d^order/dx^order of sum c_i x^i = sum c_i i!/(i-order)! x^(i-order).
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > order;) {
    double falling = 1.0;
    for (std::size_t f = 0; f < order; ++f) falling *= static_cast<double>(i - f);
    acc = acc * x + c[i] * falling;
  }
  return acc;
}

std::string Potential::describe() const {
  std::ostringstream out;
  out.precision(17);
  switch (kind_) {
    case Kind::harmonic:
      out << "harmonic(omega=" << params_[0] << ")";
      break;
    case Kind::quartic:
      out << "quartic(lambda=" << params_[0] << ")";
      break;
    case Kind::double_well:
      out << "double_well(a=" << params_[0] << ", b=" << params_[1] << ")";
      break;
    case Kind::polynomial:
      out << "polynomial(";
      for (std::size_t i = 0; i < params_.size(); ++i) out << (i ? ", " : "") << params_[i];
      out << ")";
      break;
  }
  return out.str();
}

}  // namespace phasespace
