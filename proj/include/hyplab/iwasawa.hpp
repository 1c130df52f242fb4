#pragma once

// H^n as the solvable group AN of dilations a_s(x) = s x and horizontal
// translations n_t(x) = x + (t, 0). The element g = (t, s) is the unique
// isometry n_t ∘ a_s of AN sending (0, ..., 0, 1) to the point (t, s), so
//
//   (t, s) · (t', s') = (t + s t', s s'),
//
// left translations are hyperbolic isometries, and the hyperbolic metric is
// the left-invariant metric extending the Euclidean product at e = (0, 1).

#include "hyplab/halfspace.hpp"

#include <Eigen/Dense>

namespace hyplab {

struct GElem {
  Vec t;
  double s{1};

  GElem() = default;
  GElem(Vec translation, double dilation);

  int dim() const { return static_cast<int>(t.size()) + 1; }
};

GElem identity(int n);
GElem mul(const GElem& g, const GElem& h);
GElem inv(const GElem& g);

HPoint to_point(const GElem& g);
GElem to_element(const HPoint& p);

/// Left translation L_g(p) = g · p, an isometry.
HPoint act(const GElem& g, const HPoint& p);
/// Right translation R_g(p) = p · g. Not an isometry unless s_g = 1 and t_g = 0.
HPoint right_act(const HPoint& p, const GElem& g);

/// C_g(h) = g h g^{-1} = (t + s u - w t, w) for g = (t, s), h = (u, w).
GElem conj(const GElem& g, const GElem& h);

/// Matrix of Ad_g = d(C_g)_e in the coordinate basis of T_e H^n:
/// [[s I, -t], [0, 1]].
using AdMatrix = Eigen::MatrixXd;
AdMatrix adjoint(const GElem& g);

/// Largest singular value of adjoint(g). Ad_g acts as s on the complement of
/// span(t, e_n) and as [[s, -|t|], [0, 1]] on that plane, whose top singular
/// value is (sqrt((s+1)^2 + |t|^2) + sqrt((s-1)^2 + |t|^2)) / 2.
double ad_norm(const GElem& g);

/// Coordinate Jacobian of R_g at any point: [[I, t], [0, s]].
Eigen::MatrixXd right_translation_jacobian(const GElem& g);

/// Operator norm of d(R_g)_h from (T_h, <,>_h) to (T_{hg}, <,>_{hg}).
/// Left-invariance makes it independent of h; it equals ||Ad_{g^{-1}}||.
double right_diff_norm(const GElem& g, const GElem& h);
inline double right_diff_norm(const GElem& g) { return right_diff_norm(g, identity(g.dim())); }

/// max over the closed geodesic ball B_R about e of ||Ad_g||: cosh R + sinh R.
double ad_norm_ball_max(double R);

struct BallMaxSearch {
  double value{0};
  HPoint argmax;
};

/// Grid search of ad_norm over B_R in the half-plane: shells r_k = R k / shells
/// (k = 0..shells) and `per_shell` Euclidean angles on each shell circle.
BallMaxSearch ad_norm_ball_max_numeric(double R, int shells = 100, int per_shell = 10000);

/// Same grid split into the open ball (shells k < shells) and the boundary
/// sphere S_R. A strict maximum principle means interior_max < boundary_max.
struct ShellScan {
  double interior_max{0};
  double boundary_max{0};
  double margin() const { return boundary_max - interior_max; }
};
ShellScan ad_norm_shell_scan(double R, int shells = 100, int per_shell = 10000);

}  // namespace hyplab
