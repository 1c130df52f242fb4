#pragma once

// Adaptive Gauss-Kronrod (31 points) with bisection. The error estimate of a
// single Boost GK panel has an absolute roundoff floor of a few ulps of the
// integrand, so short panels never meet a purely relative target and the
// library's own recursion runs to its depth limit. Here a panel is accepted
// once its estimate is below rel_tol * L1 or at that floor.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>

namespace hyplab::detail {

template <class F>
double adaptive_gk31(const F& f, double a, double b, double rel_tol, int depth = 0) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  if (a == b) return 0.0;
  double err = 0.0, l1 = 0.0;
  const double v = GK::integrate(f, a, b, 0, rel_tol, &err, &l1);
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * l1 / std::abs(b - a) *
                       std::max(1.0, std::abs(b - a));
  if (err <= rel_tol * l1 || err <= floor || depth >= 40) return v;
  const double m = 0.5 * (a + b);
  return adaptive_gk31(f, a, m, rel_tol, depth + 1) + adaptive_gk31(f, m, b, rel_tol, depth + 1);
}

}  // namespace hyplab::detail
