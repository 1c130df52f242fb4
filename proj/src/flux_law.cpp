#include "hyplab/flux_law.hpp"

#include "hyplab/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace hyplab {

FluxLaw FluxLaw::linear() { return FluxLaw(Kind::kLinear, 2.0, "linear"); }

FluxLaw FluxLaw::p_laplace(double p) {
  if (!(p > 1.0)) throw ContractViolation("p_laplace: exponent must exceed 1");
  std::ostringstream name;
  name << "p-laplace(" << p << ")";
  return FluxLaw(Kind::kPLaplace, p, name.str());
}

FluxLaw FluxLaw::minimal_surface() { return FluxLaw(Kind::kMinimalSurface, 0.0, "mse"); }

FluxLaw FluxLaw::from_name(const std::string& name, double p) {
  if (name == "linear") return linear();
  if (name == "p-laplace" || name == "plaplace") return p_laplace(p);
  if (name == "mse" || name == "minimal-surface") return minimal_surface();
  throw ContractViolation("unknown flux law: " + name);
}

double FluxLaw::a(double s) const {
  switch (kind_) {
    case Kind::kLinear: return s;
    case Kind::kPLaplace: return std::pow(s, p_ - 1.0);
    case Kind::kMinimalSurface: return s / std::sqrt(1.0 + s * s);
  }
  return 0.0;
}

double FluxLaw::a_inv(double y) const {
  if (y < 0.0) throw ContractViolation("a_inv: negative argument");
  switch (kind_) {
    case Kind::kLinear: return y;
    case Kind::kPLaplace: return std::pow(y, 1.0 / (p_ - 1.0));
    case Kind::kMinimalSurface:
      if (y >= 1.0) throw ContractViolation("a_inv: argument outside the range of a");
      // y / sqrt(1 - y^2), with 1 - y^2 factored for accuracy near 1.
      return y / std::sqrt((1.0 - y) * (1.0 + y));
  }
  return 0.0;
}

double FluxLaw::sup_a() const {
  return kind_ == Kind::kMinimalSurface ? 1.0 : std::numeric_limits<double>::infinity();
}

double FluxLaw::signed_a(double y) const { return std::copysign(a(std::abs(y)), y); }

double FluxLaw::signed_a_inv(double y) const { return std::copysign(a_inv(std::abs(y)), y); }

double FluxLaw::coefficient(double s, double eps) const {
  switch (kind_) {
    case Kind::kLinear: return 1.0;
    case Kind::kPLaplace: return std::pow(s * s + eps * eps, 0.5 * (p_ - 2.0));
    case Kind::kMinimalSurface: return 1.0 / std::sqrt(1.0 + s * s);
  }
  return 1.0;
}

double FluxLaw::coefficient_derivative(double s, double eps) const {
  switch (kind_) {
    case Kind::kLinear: return 0.0;
    case Kind::kPLaplace: return (p_ - 2.0) * s * std::pow(s * s + eps * eps, 0.5 * (p_ - 4.0));
    case Kind::kMinimalSurface: {
      const double q = 1.0 + s * s;
      return -s / (q * std::sqrt(q));
    }
  }
  return 0.0;
}

}  // namespace hyplab
