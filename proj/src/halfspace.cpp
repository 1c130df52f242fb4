#include "hyplab/halfspace.hpp"

#include "hyplab/errors.hpp"

#include <cmath>
#include <numbers>

namespace hyplab {

HPoint::HPoint(Vec horizontal, double height) : x(std::move(horizontal)), s(height) {
  if (!(height > 0.0)) throw ContractViolation("HPoint: height must be positive");
}

Vec HPoint::coords() const {
  Vec c(dim());
  c.head(x.size()) = x;
  c(x.size()) = s;
  return c;
}

HPoint HPoint::from_coords(const Vec& c) {
  if (c.size() < 2) throw ContractViolation("HPoint: dimension must be at least 2");
  return HPoint(c.head(c.size() - 1), c(c.size() - 1));
}

HPoint origin(int n) {
  if (n < 2) throw ContractViolation("origin: dimension must be at least 2");
  return HPoint(Vec::Zero(n - 1), 1.0);
}

double metric_inner(const HPoint& p, const HTangent& u, const HTangent& w) {
  if (!(u.base == p) || !(w.base == p)) {
    throw ContractViolation("metric_inner: tangent vectors not based at p");
  }
  if (u.v.size() != p.dim() || w.v.size() != p.dim()) {
    throw ContractViolation("metric_inner: dimension mismatch");
  }
  return u.v.dot(w.v) / (p.s * p.s);
}

double metric_norm(const HTangent& u) { return u.v.norm() / u.base.s; }

double distance(const HPoint& p, const HPoint& q) {
  if (p.dim() != q.dim()) throw ContractViolation("distance: dimension mismatch");
  const double dx2 = (p.x - q.x).squaredNorm();
  const double ds = p.s - q.s;
  const double chord = std::sqrt(dx2 + ds * ds);
  return 2.0 * std::asinh(chord / (2.0 * std::sqrt(p.s * q.s)));
}

HPoint Geodesic::eval(double tau) const {
  if (kind == Kind::kVerticalRay) {
    return HPoint(center, radius * std::exp(orientation * tau));
  }
  const double phi = tau + phase;
  const double sech = 1.0 / std::cosh(phi);
  return HPoint(center + radius * std::tanh(phi) * direction, radius * sech);
}

HTangent Geodesic::velocity(double tau) const {
  HPoint p = eval(tau);
  const int n = p.dim();
  Vec v = Vec::Zero(n);
  if (kind == Kind::kVerticalRay) {
    v(n - 1) = orientation * p.s;
  } else {
    const double phi = tau + phase;
    const double sech = 1.0 / std::cosh(phi);
    v.head(n - 1) = radius * sech * sech * direction;
    v(n - 1) = -radius * sech * std::tanh(phi);
  }
  return HTangent{std::move(p), std::move(v)};
}

Geodesic geodesic_through(const HPoint& p, const HTangent& u) {
  if (!(u.base == p)) throw ContractViolation("geodesic_through: direction not based at p");
  if (u.v.size() != p.dim()) throw ContractViolation("geodesic_through: dimension mismatch");
  const double euclid = u.v.norm();
  if (!(euclid > 0.0)) throw ContractViolation("geodesic_through: zero direction");

  // Rescale so that the hyperbolic norm is one, i.e. Euclidean norm is s.
  const Vec w = u.v * (p.s / euclid);
  const int n = p.dim();
  const Vec wh = w.head(n - 1);
  const double ws = w(n - 1);
  const double wh_norm = wh.norm();

  Geodesic g;
  if (wh_norm <= 1e-15 * p.s) {
    g.kind = Geodesic::Kind::kVerticalRay;
    g.center = p.x;
    g.direction = Vec::Zero(n - 1);
    g.radius = p.s;
    g.orientation = ws >= 0.0 ? 1.0 : -1.0;
    return g;
  }
  g.kind = Geodesic::Kind::kCircularArc;
  g.direction = wh / wh_norm;
  g.radius = p.s * p.s / wh_norm;
  g.phase = std::asinh(-ws / wh_norm);
  g.center = p.x + (p.s * ws / wh_norm) * g.direction;
  return g;
}

HPoint sphere_point(double r, std::span<const double> direction) {
  if (r < 0.0) throw ContractViolation("sphere_point: negative radius");
  const int n = static_cast<int>(direction.size());
  if (n < 2) throw ContractViolation("sphere_point: dimension must be at least 2");
  Eigen::Map<const Vec> d(direction.data(), n);
  const double len = d.norm();
  if (!(len > 0.0)) throw ContractViolation("sphere_point: zero direction");
  const double sh = std::sinh(r);
  return HPoint(sh * d.head(n - 1) / len, std::cosh(r) + sh * d(n - 1) / len);
}

HPoint sphere_point(double r, double theta) {
  const double dir[2] = {std::cos(theta), std::sin(theta)};
  return sphere_point(r, std::span<const double>(dir, 2));
}

bool sphere_membership(double r, const HPoint& p, double tol) {
  if (r < 0.0) throw ContractViolation("sphere_membership: negative radius");
  const int n = p.dim();
  Vec c = p.coords();
  c(n - 1) -= std::cosh(r);
  return std::abs(c.norm() - std::sinh(r)) <= tol * std::max(1.0, std::sinh(r));
}

namespace {

// cosh r - sinh r cos(theta), written without cancellation.
double chart_denominator(double r, double theta) {
  const double half = std::sin(0.5 * theta);
  return std::exp(-r) + 2.0 * std::sinh(r) * half * half;
}

}  // namespace

HPoint polar_chart(double r, double theta) {
  if (r < 0.0) throw ContractViolation("polar_chart: negative radius");
  const double q = chart_denominator(r, theta);
  return point2(-std::sinh(r) * std::sin(theta) / q, 1.0 / q);
}

std::pair<double, double> polar_chart_inv(const HPoint& p) {
  if (p.dim() != 2) throw ContractViolation("polar_chart_inv: half-plane points only");
  const double r = distance(origin(2), p);
  if (r == 0.0) return {0.0, 0.0};
  const double x = p.x(0);
  // arg of (z - i) / (z + i), z = x + i s.
  double theta = std::atan2(-2.0 * x, x * x + (p.s - 1.0) * (p.s + 1.0));
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  if (theta >= 2.0 * std::numbers::pi) theta = 0.0;
  return {r, theta};
}

std::pair<HTangent, HTangent> polar_frame(double r, double theta) {
  const double sh = std::sinh(r), ch = std::cosh(r);
  const double sn = std::sin(theta), cs = std::cos(theta);
  const double q = chart_denominator(r, theta);
  const double q_r = sh - ch * cs;
  const double q_t = sh * sn;
  const double q2 = q * q;

  HPoint p = polar_chart(r, theta);
  Vec d_r(2), d_t(2);
  d_r << -ch * sn / q + sh * sn * q_r / q2, -q_r / q2;
  d_t << -sh * cs / q + sh * sn * q_t / q2, -q_t / q2;
  return {HTangent{p, d_r}, HTangent{p, d_t}};
}

}  // namespace hyplab
