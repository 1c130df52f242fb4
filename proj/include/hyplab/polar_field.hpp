#pragma once

// Functions of geodesic polar coordinates (r, theta) on H^n that do not
// depend on the remaining angles. In these coordinates
//   ds^2 = dr^2 + sinh^2 r dtheta^2 + sinh^2 r sin^2 theta (...),
// so for f = f(r, theta)
//   Lap f = f_rr + (n-1) coth r f_r + (n-2) cot theta / sinh^2 r f_theta
//           + f_thetatheta / sinh^2 r,
//   |grad f|^2 = f_r^2 + f_theta^2 / sinh^2 r.

#include <functional>
#include <string>
#include <vector>

namespace hyplab {

struct PolarPoint {
  double r{0};
  double theta{0};
};

/// I_n(r) = integral_0^r sinh(s)^{n-1} ds. Closed forms for n = 2, 3;
/// adaptive Gauss-Kronrod at relative tolerance 1e-12 otherwise.
double sinh_power_integral(int n, double r);

/// Value and partial derivatives at one point.
struct FieldJet {
  double value{0};
  double dr{0};
  double dtheta{0};
  double drr{0};
  double dthetatheta{0};
};

struct ScalarField2 {
  std::string name;
  std::function<double(double r, double theta)> value;
  /// Exact partials. When empty, derivatives are taken by central
  /// differences with step 1e-4.
  std::function<FieldJet(double r, double theta)> jet;

  FieldJet evaluate(double r, double theta) const;
};

ScalarField2 constant_field(double c);

/// v(r, theta) = (C (n-1) / 2) * I_n(r) / sinh(r)^{n-1} * cos(theta):
/// bounded, harmonic, non-constant. For n = 2 it is (C/2) tanh(r/2) cos(theta).
ScalarField2 counterexample(int n, double C);

/// ln tanh(r/2): the radial Green-type harmonic function on H^2.
ScalarField2 radial_log_tanh();

/// Requires r > 0, and theta off {0, pi} when n > 2 (std::domain_error).
double laplace_beltrami(const ScalarField2& f, int n, PolarPoint p);

/// |grad f| at p. At r = 0 uses the limit of the radial derivative.
double gradient_norm(const ScalarField2& f, int n, PolarPoint p);

/// e^R * max over `samples` angles theta in [0, pi] of gradient_norm(R, theta).
double decay_indicator(const ScalarField2& f, int n, double R, int samples = 4096);

/// |f(gamma(t)) - f(x0)| / d(gamma(t), x0) along the unit-speed geodesic of
/// H^2 leaving x0 = polar_chart(p) in the direction of -grad f. Tends to
/// |grad f|(x0) as t -> 0. n = 2 only.
double steepest_quotient(const ScalarField2& f, PolarPoint p, double t);

}  // namespace hyplab
