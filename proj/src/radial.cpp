#include "hyplab/radial.hpp"

#include "hyplab/errors.hpp"
#include "hyplab/polar_field.hpp"
#include "quadrature.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace hyplab {

namespace {

constexpr double kQuadratureTol = 1e-13;

double sinh_pow(int n, double r) { return std::pow(std::sinh(r), n - 1); }

// Argument of (a sign)^{-1} at radius r for flux A.
double flux_argument(int n, double C, double A, double r) {
  return (A - C * sinh_power_integral(n, r)) / sinh_pow(n, r);
}

template <class F>
double integrate(const FluxLaw& law, F&& f, double a, double b) {
  if (a == b) return 0.0;
  if (law.kind() == FluxLaw::Kind::kMinimalSurface) {
    // The integrand may carry an inverse-square-root singularity at an end.
    thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    if (b < a) return -integrator.integrate(f, b, a, kQuadratureTol);
    return integrator.integrate(f, a, b, kQuadratureTol);
  }
  if (b < a) return -detail::adaptive_gk31(f, b, a, kQuadratureTol);
  return detail::adaptive_gk31(f, a, b, kQuadratureTol);
}

// u' with the argument clamped inside the range of a; used only where the
// admissibility of A has been established and roundoff could step outside.
double clamped_gradient(const FluxLaw& law, double y) {
  const double cap = law.sup_a();
  if (std::abs(y) >= cap) y = std::copysign(std::nextafter(cap, 0.0), y);
  return law.signed_a_inv(y);
}

struct Extremum {
  double value;
  double radius;
};

// Minimum over [lo, hi] of sign * (sinh^{n-1} + sign * C I_n): dense sampling
// followed by golden-section refinement around the best sample.
Extremum flux_limit(int n, double C, double lo, double hi, double sign) {
  auto h = [&](double r) { return sinh_pow(n, r) + sign * C * sinh_power_integral(n, r); };
  constexpr int kSamples = 2000;
  double best_r = lo, best = h(lo);
  for (int k = 1; k <= kSamples; ++k) {
    const double r = lo + (hi - lo) * k / kSamples;
    const double v = h(r);
    if (v < best) {
      best = v;
      best_r = r;
    }
  }
  double a = std::max(lo, best_r - (hi - lo) / kSamples);
  double b = std::min(hi, best_r + (hi - lo) / kSamples);
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100 && b - a > 1e-14 * std::max(1.0, b); ++it) {
    const double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    if (h(c) < h(d)) b = d; else a = c;
  }
  const double r = 0.5 * (a + b);
  const double v = h(r);
  if (v < best) return {v, r};
  return {best, best_r};
}

}  // namespace

double RadialSolution::gradient(double r) const {
  if (r < 0.0) throw ContractViolation("RadialSolution::gradient: negative radius");
  if (r == 0.0) {
    if (flux != 0.0) throw ContractViolation("RadialSolution::gradient: singular at the center");
    return 0.0;
  }
  const double y = flux_argument(n, C, flux, r);
  if (std::abs(y) >= law.sup_a()) {
    std::ostringstream msg;
    msg << "flux exceeds sup a at r = " << r;
    throw NoSolution(msg.str(), r);
  }
  return law.signed_a_inv(y);
}

double RadialSolution::value(double r) const {
  if (r < r_inner) throw ContractViolation("RadialSolution::value: radius below the domain");
  auto du = [this](double rho) {
    if (rho <= 0.0) return 0.0;
    return clamped_gradient(law, flux_argument(n, C, flux, rho));
  };
  return anchor_u + integrate(law, du, anchor_r, r);
}

double RadialSolution::flux_invariant(double r) const {
  return sinh_pow(n, r) * law.signed_a(gradient(r)) + C * sinh_power_integral(n, r);
}

RadialSolution radial_solve(const FluxLaw& law, int n, double C, double r0, double R,
                            double u_inner, double u_outer) {
  if (n < 2) throw ContractViolation("radial_solve: n must be at least 2");
  if (!(r0 > 0.0) || !(R > r0)) throw ContractViolation("radial_solve: need 0 < r0 < R");
  if (!std::isfinite(u_inner) || !std::isfinite(u_outer) || !std::isfinite(C)) {
    throw ContractViolation("radial_solve: non-finite data");
  }

  RadialSolution sol;
  sol.law = law;
  sol.n = n;
  sol.C = C;
  sol.r_inner = r0;
  sol.r_outer = R;
  sol.anchor_r = r0;
  sol.anchor_u = u_inner;

  const double target = u_outer - u_inner;
  auto jump = [&](double A) {
    auto du = [&](double rho) { return clamped_gradient(law, flux_argument(n, C, A, rho)); };
    return integrate(law, du, r0, R);
  };

  double lo, hi;
  if (law.sup_a() < std::numeric_limits<double>::infinity()) {
    // Admissible fluxes: |A - C I(r)| < sup_a * sinh^{n-1}(r) on [r0, R].
    const double cap = law.sup_a();
    const Extremum upper = flux_limit(n, C / cap, r0, R, +1.0);   // min(S + C I / cap)
    const Extremum lower = flux_limit(n, C / cap, r0, R, -1.0);   // min(S - C I / cap)
    hi = cap * upper.value;
    lo = -cap * lower.value;
    if (!(hi > lo)) throw NoSolution("no admissible flux on this annulus", upper.radius);
    if (target >= jump(hi)) {
      std::ostringstream msg;
      msg << "boundary jump " << target << " exceeds the largest attainable; gradient blows up at r = "
          << upper.radius;
      throw NoSolution(msg.str(), upper.radius);
    }
    if (target <= jump(lo)) {
      std::ostringstream msg;
      msg << "boundary jump " << target << " below the smallest attainable; gradient blows up at r = "
          << lower.radius;
      throw NoSolution(msg.str(), lower.radius);
    }
  } else {
    lo = -1.0;
    hi = 1.0;
    for (int k = 0; k < 400 && jump(hi) < target; ++k) {
      lo = hi;
      hi *= 2.0;
    }
    for (int k = 0; k < 400 && jump(lo) > target; ++k) {
      hi = lo;
      lo *= 2.0;
    }
  }

  const double scale = std::max(1.0, std::abs(target));
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double j = jump(mid);
    if (j == target || std::abs(j - target) <= 1e-14 * scale) {
      lo = hi = mid;
      break;
    }
    if (j < target) lo = mid; else hi = mid;
  }
  sol.flux = 0.5 * (lo + hi);
  return sol;
}

RadialSolution radial_solve_disk(const FluxLaw& law, int n, double C, double R, double u_outer) {
  if (n < 2) throw ContractViolation("radial_solve_disk: n must be at least 2");
  if (!(R > 0.0)) throw ContractViolation("radial_solve_disk: R must be positive");
  RadialSolution sol;
  sol.law = law;
  sol.n = n;
  sol.C = C;
  sol.r_inner = 0.0;
  sol.r_outer = R;
  sol.flux = 0.0;
  sol.anchor_r = R;
  sol.anchor_u = u_outer;
  // Regular at the center only if the source flux stays within sup a.
  for (int k = 1; k <= 1000; ++k) sol.gradient(R * k / 1000);
  return sol;
}

}  // namespace hyplab
