#include "hyplab/iwasawa.hpp"

#include "hyplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hyplab {

namespace {

void check_same_dim(const GElem& g, const GElem& h, const char* where) {
  if (g.dim() != h.dim()) throw ContractViolation(std::string(where) + ": dimension mismatch");
}

}  // namespace

GElem::GElem(Vec translation, double dilation) : t(std::move(translation)), s(dilation) {
  if (!(dilation > 0.0)) throw ContractViolation("GElem: dilation must be positive");
}

GElem identity(int n) {
  if (n < 2) throw ContractViolation("identity: dimension must be at least 2");
  return GElem(Vec::Zero(n - 1), 1.0);
}

GElem mul(const GElem& g, const GElem& h) {
  check_same_dim(g, h, "mul");
  return GElem(g.t + g.s * h.t, g.s * h.s);
}

GElem inv(const GElem& g) { return GElem(-g.t / g.s, 1.0 / g.s); }

HPoint to_point(const GElem& g) { return HPoint(g.t, g.s); }
GElem to_element(const HPoint& p) { return GElem(p.x, p.s); }

HPoint act(const GElem& g, const HPoint& p) {
  if (g.dim() != p.dim()) throw ContractViolation("act: dimension mismatch");
  return HPoint(g.t + g.s * p.x, g.s * p.s);
}

HPoint right_act(const HPoint& p, const GElem& g) {
  if (g.dim() != p.dim()) throw ContractViolation("right_act: dimension mismatch");
  return HPoint(p.x + p.s * g.t, p.s * g.s);
}

GElem conj(const GElem& g, const GElem& h) {
  check_same_dim(g, h, "conj");
  return GElem(g.t + g.s * h.t - h.s * g.t, h.s);
}

AdMatrix adjoint(const GElem& g) {
  const int n = g.dim();
  AdMatrix m = AdMatrix::Identity(n, n);
  m.topLeftCorner(n - 1, n - 1) *= g.s;
  m.topRightCorner(n - 1, 1) = -g.t;
  return m;
}

double ad_norm(const GElem& g) {
  const double tau2 = g.t.squaredNorm();
  const double sp = g.s + 1.0, sm = g.s - 1.0;
  return 0.5 * (std::sqrt(sp * sp + tau2) + std::sqrt(sm * sm + tau2));
}

Eigen::MatrixXd right_translation_jacobian(const GElem& g) {
  const int n = g.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  m.topRightCorner(n - 1, 1) = g.t;
  m(n - 1, n - 1) = g.s;
  return m;
}

double right_diff_norm(const GElem& g, const GElem& h) {
  check_same_dim(g, h, "right_diff_norm");
  // |D v|_{hg} / |v|_h = (|D v| / (s_h s_g)) / (|v| / s_h).
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(right_translation_jacobian(g));
  const double image_height = h.s * g.s;
  return svd.singularValues()(0) * h.s / image_height;
}

double ad_norm_ball_max(double R) {
  if (R < 0.0) throw ContractViolation("ad_norm_ball_max: negative radius");
  return std::cosh(R) + std::sinh(R);
}

BallMaxSearch ad_norm_ball_max_numeric(double R, int shells, int per_shell) {
  if (R < 0.0) throw ContractViolation("ad_norm_ball_max_numeric: negative radius");
  if (shells < 1 || per_shell < 1) throw ContractViolation("ad_norm_ball_max_numeric: empty grid");
  BallMaxSearch best{-1.0, origin(2)};
  const double dtheta = 2.0 * std::numbers::pi / per_shell;
  for (int k = 0; k <= shells; ++k) {
    const double r = R * k / shells;
    const double ch = std::cosh(r), sh = std::sinh(r);
    for (int j = 0; j < per_shell; ++j) {
      const double theta = j * dtheta;
      GElem g(Vec::Constant(1, sh * std::cos(theta)), ch + sh * std::sin(theta));
      const double value = ad_norm(g);
      if (value > best.value) best = {value, to_point(g)};
      if (k == 0) break;  // the r = 0 shell is the single point e
    }
  }
  return best;
}

ShellScan ad_norm_shell_scan(double R, int shells, int per_shell) {
  if (!(R > 0.0)) throw ContractViolation("ad_norm_shell_scan: R must be positive");
  if (shells < 1 || per_shell < 1) throw ContractViolation("ad_norm_shell_scan: empty grid");
  ShellScan scan;
  const double dtheta = 2.0 * std::numbers::pi / per_shell;
  for (int k = 0; k <= shells; ++k) {
    const double r = R * k / shells;
    const double ch = std::cosh(r), sh = std::sinh(r);
    double& target = k == shells ? scan.boundary_max : scan.interior_max;
    for (int j = 0; j < per_shell; ++j) {
      const double theta = j * dtheta;
      target = std::max(target, ad_norm(GElem(Vec::Constant(1, sh * std::cos(theta)),
                                              ch + sh * std::sin(theta))));
      if (k == 0) break;
    }
  }
  return scan;
}

}  // namespace hyplab
