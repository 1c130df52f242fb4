#pragma once

// Upper half-space model of hyperbolic n-space, curvature fixed at -1:
//   H^n = { (x, s) : x in R^{n-1}, s > 0 },   ds^2 = |dx|^2 / s^2.

#include <Eigen/Dense>

#include <span>
#include <utility>

namespace hyplab {

using Vec = Eigen::VectorXd;

struct HPoint {
  Vec x;       // horizontal coordinates, size n-1
  double s{1}; // height, > 0

  HPoint() = default;
  HPoint(Vec horizontal, double height);

  int dim() const { return static_cast<int>(x.size()) + 1; }
  /// Euclidean coordinates (x_1, ..., x_{n-1}, s).
  Vec coords() const;
  static HPoint from_coords(const Vec& c);

  friend bool operator==(const HPoint& a, const HPoint& b) {
    return a.s == b.s && a.x == b.x;
  }
};

/// The base point (0, ..., 0, 1).
HPoint origin(int n);

/// Convenience for the half-plane.
inline HPoint point2(double x, double s) { return HPoint(Vec::Constant(1, x), s); }

struct HTangent {
  HPoint base;
  Vec v;  // coordinate components, size n
};

/// Riemannian inner product at p. Throws ContractViolation if u or w is not
/// based at p.
double metric_inner(const HPoint& p, const HTangent& u, const HTangent& w);
double metric_norm(const HTangent& u);

/// Hyperbolic distance, evaluated as 2 asinh(|p - q| / (2 sqrt(s_p s_q))),
/// which equals arccosh(1 + |p - q|^2 / (2 s_p s_q)) without the cancellation
/// near p = q.
double distance(const HPoint& p, const HPoint& q);

/// Unit-speed geodesic. Vertical rays are (foot, height * e^{orientation*tau});
/// every other geodesic is a half circle orthogonal to the boundary,
/// (center + radius tanh(tau + phase) dir, radius sech(tau + phase)).
struct Geodesic {
  enum class Kind { kVerticalRay, kCircularArc };

  Kind kind{Kind::kVerticalRay};
  Vec center;          // foot of the ray, or center of the arc on s = 0
  Vec direction;       // unit horizontal direction of the arc's plane
  double radius{1};    // ray: height at tau = 0; arc: Euclidean radius
  double phase{0};     // arc only
  double orientation{1};  // ray only, +1 up / -1 down

  HPoint eval(double tau) const;
  /// Coordinate velocity at tau; its hyperbolic norm is 1.
  HTangent velocity(double tau) const;
};

/// Geodesic with eval(0) = p and initial direction u (normalized internally).
/// Throws ContractViolation for a zero direction or u not based at p.
Geodesic geodesic_through(const HPoint& p, const HTangent& u);

/// The geodesic sphere S_r about origin(n) is the Euclidean sphere of center
/// (0, ..., 0, cosh r) and radius sinh r. `direction` is a Euclidean unit
/// vector of R^n; its last component plays the role of sin(theta).
HPoint sphere_point(double r, std::span<const double> direction);
/// n = 2: (sinh r cos(theta), cosh r + sinh r sin(theta)). theta here is the
/// Euclidean angle of the circle, not the intrinsic polar angle.
HPoint sphere_point(double r, double theta);

bool sphere_membership(double r, const HPoint& p, double tol = 1e-10);

// Intrinsic geodesic polar coordinates about (0, 1) in the half-plane:
// the disk point tanh(r/2) e^{i theta} mapped through w -> i (1 + w)/(1 - w).
// theta = 0 points straight up.
HPoint polar_chart(double r, double theta);
/// Returns (r, theta) with theta in [0, 2pi); at the pole returns (0, 0).
std::pair<double, double> polar_chart_inv(const HPoint& p);

/// Coordinate vectors d/dr and d/dtheta of the polar chart at (r, theta),
/// expressed as half-plane tangent vectors.
std::pair<HTangent, HTangent> polar_frame(double r, double theta);

}  // namespace hyplab
