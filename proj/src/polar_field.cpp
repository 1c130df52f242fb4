#include "hyplab/polar_field.hpp"

#include "hyplab/errors.hpp"
#include "hyplab/halfspace.hpp"
#include "quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hyplab {

namespace {

constexpr double kFiniteDifferenceStep = 1e-4;

// sinh(x) - x without cancellation for small x.
double sinh_minus_identity(double x) {
  if (std::abs(x) >= 1.0) return std::sinh(x) - x;
  const double x2 = x * x;
  double term = x * x2 / 6.0;
  double sum = 0.0;
  for (int k = 1; k < 30 && std::abs(term) > 1e-18 * std::abs(sum); ++k) {
    sum += term;
    term *= x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
  }
  return sum;
}

FieldJet finite_difference_jet(const std::function<double(double, double)>& f, double r,
                               double theta) {
  const double h = kFiniteDifferenceStep;
  FieldJet j;
  j.value = f(r, theta);
  const double rp = f(r + h, theta), rm = f(r - h, theta);
  const double tp = f(r, theta + h), tm = f(r, theta - h);
  j.dr = (rp - rm) / (2.0 * h);
  j.dtheta = (tp - tm) / (2.0 * h);
  j.drr = (rp - 2.0 * j.value + rm) / (h * h);
  j.dthetatheta = (tp - 2.0 * j.value + tm) / (h * h);
  return j;
}

// q(r) = I_n(r) / sinh(r)^{n-1} and its first two derivatives.
struct RadialShape {
  double q, dq, ddq;
};

RadialShape counterexample_shape(int n, double r) {
  if (r == 0.0) return {0.0, 1.0 / n, 0.0};
  if (n == 2) {
    const double ch = std::cosh(0.5 * r);
    const double th = std::tanh(0.5 * r);
    const double sech2 = 1.0 / (ch * ch);
    return {th, 0.5 * sech2, -0.5 * th * sech2};
  }
  const double sh = std::sinh(r);
  const double coth = std::cosh(r) / sh;
  const double q = sinh_power_integral(n, r) / std::pow(sh, n - 1);
  const double dq = 1.0 - (n - 1) * coth * q;
  const double ddq = -(n - 1) * (coth * dq - q / (sh * sh));
  return {q, dq, ddq};
}

}  // namespace

double sinh_power_integral(int n, double r) {
  if (n < 2) throw ContractViolation("sinh_power_integral: n must be at least 2");
  if (r < 0.0) throw ContractViolation("sinh_power_integral: negative radius");
  if (r == 0.0) return 0.0;
  if (n == 2) {
    const double sh = std::sinh(0.5 * r);
    return 2.0 * sh * sh;  // cosh r - 1
  }
  if (n == 3) return 0.25 * sinh_minus_identity(2.0 * r);  // (sinh r cosh r - r) / 2
  auto integrand = [n](double s) { return std::pow(std::sinh(s), n - 1); };
  return detail::adaptive_gk31(integrand, 0.0, r, 1e-13);
}

FieldJet ScalarField2::evaluate(double r, double theta) const {
  if (jet) return jet(r, theta);
  return finite_difference_jet(value, r, theta);
}

ScalarField2 constant_field(double c) {
  ScalarField2 f;
  f.name = "constant";
  f.value = [c](double, double) { return c; };
  f.jet = [c](double, double) { return FieldJet{c, 0.0, 0.0, 0.0, 0.0}; };
  return f;
}

ScalarField2 counterexample(int n, double C) {
  if (n < 2) throw ContractViolation("counterexample: n must be at least 2");
  if (!(C > 0.0)) throw ContractViolation("counterexample: C must be positive");
  const double k = 0.5 * C * (n - 1);
  ScalarField2 f;
  f.name = "counterexample";
  f.value = [n, k](double r, double theta) {
    return k * counterexample_shape(n, r).q * std::cos(theta);
  };
  f.jet = [n, k](double r, double theta) {
    const RadialShape q = counterexample_shape(n, r);
    const double c = std::cos(theta), s = std::sin(theta);
    return FieldJet{k * q.q * c, k * q.dq * c, -k * q.q * s, k * q.ddq * c, -k * q.q * c};
  };
  return f;
}

ScalarField2 radial_log_tanh() {
  ScalarField2 f;
  f.name = "log_tanh";
  f.value = [](double r, double) { return std::log(std::tanh(0.5 * r)); };
  f.jet = [](double r, double) {
    const double sh = std::sinh(r);
    return FieldJet{std::log(std::tanh(0.5 * r)), 1.0 / sh, 0.0, -std::cosh(r) / (sh * sh), 0.0};
  };
  return f;
}

double laplace_beltrami(const ScalarField2& f, int n, PolarPoint p) {
  if (!(p.r > 0.0)) throw std::domain_error("laplace_beltrami: r must be positive");
  const double sin_t = std::sin(p.theta);
  if (n > 2 && std::abs(sin_t) < 1e-14) {
    throw std::domain_error("laplace_beltrami: theta on the polar axis");
  }
  const FieldJet j = f.evaluate(p.r, p.theta);
  const double sh = std::sinh(p.r);
  const double sh2 = sh * sh;
  double lap = j.drr + (n - 1) * (std::cosh(p.r) / sh) * j.dr + j.dthetatheta / sh2;
  if (n > 2) lap += (n - 2) * (std::cos(p.theta) / sin_t) / sh2 * j.dtheta;
  return lap;
}

double gradient_norm(const ScalarField2& f, int /*n*/, PolarPoint p) {
  if (p.r < 0.0) throw ContractViolation("gradient_norm: negative radius");
  if (p.r == 0.0) {
    // At the pole the gradient is the largest directional derivative.
    double best = 0.0;
    constexpr int kDirections = 360;
    for (int k = 0; k < kDirections; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / kDirections;
      best = std::max(best, std::abs(f.evaluate(0.0, theta).dr));
    }
    return best;
  }
  const FieldJet j = f.evaluate(p.r, p.theta);
  const double sh = std::sinh(p.r);
  return std::sqrt(j.dr * j.dr + (j.dtheta / sh) * (j.dtheta / sh));
}

double decay_indicator(const ScalarField2& f, int n, double R, int samples) {
  if (!(R > 0.0)) throw ContractViolation("decay_indicator: R must be positive");
  if (samples < 2) throw ContractViolation("decay_indicator: need at least two samples");
  double sup = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double theta = std::numbers::pi * k / (samples - 1);
    sup = std::max(sup, gradient_norm(f, n, {R, theta}));
  }
  return std::exp(R) * sup;
}

double steepest_quotient(const ScalarField2& f, PolarPoint p, double t) {
  if (!(p.r > 0.0)) throw ContractViolation("steepest_quotient: r must be positive");
  const FieldJet j = f.evaluate(p.r, p.theta);
  const auto [d_r, d_theta] = polar_frame(p.r, p.theta);
  const double sh = std::sinh(p.r);
  // grad f = f_r d_r + (f_theta / sinh^2 r) d_theta.
  Vec descent = -(j.dr * d_r.v + (j.dtheta / (sh * sh)) * d_theta.v);
  const HPoint x0 = d_r.base;
  const Geodesic gamma = geodesic_through(x0, HTangent{x0, descent});
  const HPoint y = gamma.eval(t);
  const auto [r1, theta1] = polar_chart_inv(y);
  return std::abs(f.value(r1, theta1) - j.value) / distance(y, x0);
}

}  // namespace hyplab
