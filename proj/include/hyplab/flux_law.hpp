#pragma once

// Coefficient laws for div( a(|grad u|) / |grad u| grad u ) + C = 0 with
// a(0) = 0 and a' > 0.

#include <string>

namespace hyplab {

class FluxLaw {
 public:
  enum class Kind { kLinear, kPLaplace, kMinimalSurface };

  static FluxLaw linear();
  /// a(s) = s^{p-1}, p > 1.
  static FluxLaw p_laplace(double p);
  /// a(s) = s / sqrt(1 + s^2); sup a = 1.
  static FluxLaw minimal_surface();
  /// "linear", "p-laplace" (uses p) or "mse". Throws ContractViolation.
  static FluxLaw from_name(const std::string& name, double p = 2.0);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double exponent() const { return p_; }

  double a(double s) const;
  /// Inverse of a on [0, sup_a()).
  double a_inv(double y) const;
  /// +infinity for linear and p-Laplace.
  double sup_a() const;

  /// a(|y|) sign(y) and its inverse.
  double signed_a(double y) const;
  double signed_a_inv(double y) const;

  /// a(s)/s. For p-Laplace the degenerate point s = 0 is regularized as
  /// (s^2 + eps^2)^{(p-2)/2}.
  double coefficient(double s, double eps = 1e-12) const;
  /// d/ds of coefficient(s, eps).
  double coefficient_derivative(double s, double eps = 1e-12) const;

 private:
  FluxLaw(Kind kind, double p, std::string name) : kind_(kind), p_(p), name_(std::move(name)) {}

  Kind kind_;
  double p_;
  std::string name_;
};

}  // namespace hyplab
