#pragma once

// Right-invariant vector fields on AN and their norms along geodesics.
//
// X(g) = d(R_g)_e(x) is Killing for the left-invariant metric, so along a
// geodesic it is a Jacobi field J and f(tau) = |J(tau)|^2. With K = -1,
//   f'' = 2 |J|^2 - 2 <J, gamma'>^2 + 2 |J'|^2 > 0
// whenever J is not tangent to gamma: f has no interior maximum.

#include "hyplab/halfspace.hpp"
#include "hyplab/iwasawa.hpp"

#include <Eigen/Dense>

#include <vector>

namespace hyplab {

struct RightInvField {
  Vec x;  // value at e: (a_1, ..., a_{n-1}, b)

  int dim() const { return static_cast<int>(x.size()); }
};

/// X(g) = (a + b t_g, b s_g), based at the point g.
HTangent field_eval(const RightInvField& X, const GElem& g);
HTangent field_eval(const RightInvField& X, const HPoint& p);

/// f(tau) = |X(gamma(tau))|^2. Equals |Ad_{gamma(tau)^{-1}}(x)|^2 at e.
double norm_sq_along(const RightInvField& X, const Geodesic& gamma, double tau);

/// Levi-Civita derivative of X along gamma at tau. X(gamma(tau)) has
/// coordinate derivative b gamma'(tau), corrected by the half-space
/// Christoffel terms.
HTangent covariant_derivative_along(const RightInvField& X, const Geodesic& gamma, double tau);

/// Second derivative of f from the Jacobi equation with K = -1.
double jacobi_convexity(const RightInvField& X, const Geodesic& gamma, double tau);

/// Critical points of f on [lo, hi]: sign changes of the central-difference f'
/// on a uniform scan, refined by bisection to 1e-10. Empty if f is monotone.
std::vector<double> critical_scan(const RightInvField& X, const Geodesic& gamma, double lo,
                                  double hi, int scan_points = 400);

/// f''(tau) by central second differences, Richardson-extrapolated over steps
/// h and h/2.
double convexity_at(const RightInvField& X, const Geodesic& gamma, double tau, double h = 1e-3);

/// Orthonormal frames parallel-transported along gamma by fixed-step RK4.
/// frames[k] holds the frame vectors as columns (coordinate components) at
/// tau[k]. The initial frame is s * (coordinate basis) at gamma(lo).
struct TransportedFrames {
  std::vector<double> tau;
  std::vector<Eigen::MatrixXd> frames;
};
TransportedFrames parallel_transport(const Geodesic& gamma, double lo, double hi, double step = 1e-3);

/// Largest deviation of J = X∘gamma from the Jacobi equation
/// j_i'' = j_i - <J, gamma'><gamma', E_i> in transported-frame components,
/// using second differences on the transport grid.
double jacobi_residual(const RightInvField& X, const Geodesic& gamma, double lo, double hi,
                       double step = 1e-3);

}  // namespace hyplab
