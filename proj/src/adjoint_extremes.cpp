#include "hyplab/adjoint_extremes.hpp"

#include "hyplab/errors.hpp"

#include <cmath>

namespace hyplab {

namespace {

// Christoffel correction for ds^2 = |dx|^2/s^2:
//   nabla_V W = D_V W - (V_n/s) W - (W_n/s) V + (V.W / s) e_n.
Vec christoffel_term(const Vec& v, const Vec& w, double s) {
  const int n = static_cast<int>(v.size());
  Vec out = -(v(n - 1) / s) * w - (w(n - 1) / s) * v;
  out(n - 1) += v.dot(w) / s;
  return out;
}

double scan_derivative(const RightInvField& X, const Geodesic& gamma, double tau, double h) {
  return (norm_sq_along(X, gamma, tau + h) - norm_sq_along(X, gamma, tau - h)) / (2.0 * h);
}

}  // namespace

HTangent field_eval(const RightInvField& X, const HPoint& p) {
  if (X.dim() != p.dim()) throw ContractViolation("field_eval: dimension mismatch");
  const int n = p.dim();
  const double b = X.x(n - 1);
  Vec v(n);
  v.head(n - 1) = X.x.head(n - 1) + b * p.x;
  v(n - 1) = b * p.s;
  return HTangent{p, std::move(v)};
}

HTangent field_eval(const RightInvField& X, const GElem& g) { return field_eval(X, to_point(g)); }

double norm_sq_along(const RightInvField& X, const Geodesic& gamma, double tau) {
  const HPoint p = gamma.eval(tau);
  const HTangent J = field_eval(X, p);
  return metric_inner(p, J, J);
}

HTangent covariant_derivative_along(const RightInvField& X, const Geodesic& gamma, double tau) {
  const HTangent vel = gamma.velocity(tau);
  const HTangent J = field_eval(X, vel.base);
  const int n = vel.base.dim();
  const double b = X.x(n - 1);
  Vec d = b * vel.v + christoffel_term(vel.v, J.v, vel.base.s);
  return HTangent{vel.base, std::move(d)};
}

double jacobi_convexity(const RightInvField& X, const Geodesic& gamma, double tau) {
  const HTangent vel = gamma.velocity(tau);
  const HPoint& p = vel.base;
  const HTangent J = field_eval(X, p);
  const HTangent dJ = covariant_derivative_along(X, gamma, tau);
  const double jj = metric_inner(p, J, J);
  const double jv = metric_inner(p, J, vel);
  const double djdj = metric_inner(p, dJ, dJ);
  // -2 K |gamma' ^ J|^2 + 2 |J'|^2 with K = -1 and |gamma'| = 1.
  return 2.0 * (jj - jv * jv) + 2.0 * djdj;
}

std::vector<double> critical_scan(const RightInvField& X, const Geodesic& gamma, double lo,
                                  double hi, int scan_points) {
  if (!(hi > lo) || scan_points < 2) throw ContractViolation("critical_scan: empty interval");
  constexpr double kDiffStep = 1e-5;
  std::vector<double> roots;
  const double dt = (hi - lo) / scan_points;
  double t_prev = lo;
  double d_prev = scan_derivative(X, gamma, t_prev, kDiffStep);
  for (int k = 1; k <= scan_points; ++k) {
    const double t = lo + k * dt;
    const double d = scan_derivative(X, gamma, t, kDiffStep);
    if (d_prev == 0.0) {
      roots.push_back(t_prev);
    } else if (d_prev * d < 0.0) {
      double a = t_prev, b = t, da = d_prev;
      while (b - a > 1e-10) {
        const double m = 0.5 * (a + b);
        const double dm = scan_derivative(X, gamma, m, kDiffStep);
        if (dm == 0.0) { a = b = m; break; }
        if (da * dm < 0.0) {
          b = m;
        } else {
          a = m;
          da = dm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    t_prev = t;
    d_prev = d;
  }
  return roots;
}

double convexity_at(const RightInvField& X, const Geodesic& gamma, double tau, double h) {
  const double f0 = norm_sq_along(X, gamma, tau);
  auto second = [&](double step) {
    return (norm_sq_along(X, gamma, tau + step) - 2.0 * f0 + norm_sq_along(X, gamma, tau - step)) /
           (step * step);
  };
  const double coarse = second(h);
  const double fine = second(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

TransportedFrames parallel_transport(const Geodesic& gamma, double lo, double hi, double step) {
  if (!(hi > lo) || !(step > 0.0)) throw ContractViolation("parallel_transport: empty interval");
  const int steps = static_cast<int>(std::ceil((hi - lo) / step - 1e-9));
  const double h = (hi - lo) / steps;

  // dE/dtau = -Gamma(gamma', E).
  auto rhs = [&](double tau, const Eigen::MatrixXd& E) {
    const HTangent vel = gamma.velocity(tau);
    Eigen::MatrixXd out(E.rows(), E.cols());
    for (int c = 0; c < E.cols(); ++c) {
      out.col(c) = -christoffel_term(vel.v, E.col(c), vel.base.s);
    }
    return out;
  };

  TransportedFrames result;
  const HPoint start = gamma.eval(lo);
  Eigen::MatrixXd E = start.s * Eigen::MatrixXd::Identity(start.dim(), start.dim());
  result.tau.reserve(steps + 1);
  result.frames.reserve(steps + 1);
  result.tau.push_back(lo);
  result.frames.push_back(E);
  for (int k = 0; k < steps; ++k) {
    const double t = lo + k * h;
    const Eigen::MatrixXd k1 = rhs(t, E);
    const Eigen::MatrixXd k2 = rhs(t + 0.5 * h, E + 0.5 * h * k1);
    const Eigen::MatrixXd k3 = rhs(t + 0.5 * h, E + 0.5 * h * k2);
    const Eigen::MatrixXd k4 = rhs(t + h, E + h * k3);
    E += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    result.tau.push_back(lo + (k + 1) * h);
    result.frames.push_back(E);
  }
  return result;
}

double jacobi_residual(const RightInvField& X, const Geodesic& gamma, double lo, double hi,
                       double step) {
  const TransportedFrames tf = parallel_transport(gamma, lo, hi, step);
  const int m = static_cast<int>(tf.tau.size());
  if (m < 3) throw ContractViolation("jacobi_residual: interval too short");
  const int n = X.dim();
  const double h = tf.tau[1] - tf.tau[0];

  // Components j_i = <J, E_i> on the transport grid.
  Eigen::MatrixXd comp(n, m);
  for (int k = 0; k < m; ++k) {
    const HPoint p = gamma.eval(tf.tau[k]);
    const HTangent J = field_eval(X, p);
    comp.col(k) = tf.frames[k].transpose() * J.v / (p.s * p.s);
  }
  double worst = 0.0;
  for (int k = 1; k + 1 < m; ++k) {
    const HTangent vel = gamma.velocity(tf.tau[k]);
    const HPoint& p = vel.base;
    const HTangent J = field_eval(X, p);
    const double jv = metric_inner(p, J, vel);
    for (int i = 0; i < n; ++i) {
      const double vi = tf.frames[k].col(i).dot(vel.v) / (p.s * p.s);
      const double second = (comp(i, k + 1) - 2.0 * comp(i, k) + comp(i, k - 1)) / (h * h);
      worst = std::max(worst, std::abs(second - (comp(i, k) - jv * vi)));
    }
  }
  return worst;
}

}  // namespace hyplab
