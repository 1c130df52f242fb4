#pragma once

// Rotationally symmetric solutions of div(a(|grad u|)/|grad u| grad u) + C = 0
// on geodesic annuli and disks of H^n. The divergence theorem over the ball
// B_r gives
//   sinh(r)^{n-1} a(|u'|) sign(u') + C I_n(r) = A      (A constant),
// so u' = (a sign)^{-1}((A - C I_n(r)) / sinh(r)^{n-1}) and A is fixed by the
// boundary data.

#include "hyplab/flux_law.hpp"

namespace hyplab {

struct RadialSolution {
  FluxLaw law = FluxLaw::linear();
  int n{2};
  double C{0};
  double r_inner{0};  // 0 for disks
  double r_outer{1};
  double flux{0};     // A
  double anchor_r{0}; // u(anchor_r) = anchor_u
  double anchor_u{0};

  bool is_disk() const { return r_inner == 0.0; }

  /// Signed u'(r). Defined for every r > 0 where the flux law can carry the
  /// flux; throws NoSolution otherwise.
  double gradient(double r) const;
  /// u(r) by adaptive quadrature of u' from the anchor.
  double value(double r) const;
  /// sinh(r)^{n-1} a(|u'|) sign(u') + C I_n(r); equals `flux` for all r.
  double flux_invariant(double r) const;
};

/// Annulus r0 < r < R with u(r0) = u_inner, u(R) = u_outer. The flux A is
/// found by bisection on the strictly increasing map A -> u(R) - u(r0).
/// Throws NoSolution when the data need more flux than sup a allows
/// (minimal surface law), reporting the radius where the gradient blows up.
RadialSolution radial_solve(const FluxLaw& law, int n, double C, double r0, double R,
                            double u_inner, double u_outer);

/// Disk of radius R with u(R) = u_outer. Regularity at the center forces A = 0.
RadialSolution radial_solve_disk(const FluxLaw& law, int n, double C, double R, double u_outer);

}  // namespace hyplab
