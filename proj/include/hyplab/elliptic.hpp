#pragma once

// Finite-volume discretization of div(a(|grad u|)/|grad u| grad u) + C = 0 on
// geodesic annuli and disks of H^2 in polar coordinates (r, theta) about
// e = (0, 1), area element sinh r dr dtheta, plus the checks that exercise
// the comparison principle, left invariance and the gradient bound on solved
// instances.

#include "hyplab/flux_law.hpp"
#include "hyplab/iwasawa.hpp"
#include "hyplab/polar_field.hpp"
#include "hyplab/radial.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hyplab {

/// Polar grid with rings i = 0..nr and periodic angles j = 0..ntheta-1.
/// Annulus: r_i = r_inner + i h_r, both end rings carry Dirichlet data.
/// Disk: r_i = (i + 1/2) h_r with r_nr = R; the innermost cells close at the
/// center, and only ring nr is a boundary.
class AnnulusGrid {
 public:
  static AnnulusGrid annulus(double r_inner, double r_outer, int nr, int ntheta);
  static AnnulusGrid disk(double r_outer, int nr, int ntheta);

  bool is_disk() const { return disk_; }
  int nr() const { return nr_; }
  int ntheta() const { return ntheta_; }
  double r_inner() const { return r_inner_; }
  double r_outer() const { return r_outer_; }
  double hr() const { return hr_; }
  double htheta() const { return htheta_; }
  double r(int i) const;
  double theta(int j) const;
  int size() const { return (nr_ + 1) * ntheta_; }
  int index(int i, int j) const { return i * ntheta_ + wrap(j); }
  int wrap(int j) const { return ((j % ntheta_) + ntheta_) % ntheta_; }
  bool is_boundary(int i) const { return i == nr_ || (!disk_ && i == 0); }

  friend bool operator==(const AnnulusGrid&, const AnnulusGrid&) = default;

 private:
  AnnulusGrid(double r_inner, double r_outer, int nr, int ntheta, bool disk);

  double r_inner_{1};
  double r_outer_{2};
  int nr_{8};
  int ntheta_{8};
  bool disk_{false};
  double hr_{0};
  double htheta_{0};
};

struct DiscreteField {
  AnnulusGrid grid;
  std::vector<double> values;

  explicit DiscreteField(const AnnulusGrid& g, double fill = 0.0)
      : grid(g), values(static_cast<std::size_t>(g.size()), fill) {}

  double& operator()(int i, int j) { return values[static_cast<std::size_t>(grid.index(i, j))]; }
  double operator()(int i, int j) const {
    return values[static_cast<std::size_t>(grid.index(i, j))];
  }

  static DiscreteField sample(const AnnulusGrid& g,
                              const std::function<double(double r, double theta)>& f);
};

/// Dirichlet values on the boundary rings, one entry per angle.
/// `inner` is ignored on disk grids.
struct RingData {
  std::vector<double> inner;
  std::vector<double> outer;

  static RingData from_functions(const AnnulusGrid& g, const std::function<double(double)>& inner,
                                 const std::function<double(double)>& outer);
};

enum class IterationScheme {
  /// Damped nonlinear Gauss-Seidel, red-black order, frozen local coefficients.
  kGaussSeidel,
  /// Frozen-coefficient linearization solved with a sparse Cholesky factorization
  /// at every outer step (Picard), with step damping on residual growth.
  kPicard,
  /// Newton on the cell balances (sparse LU) with backtracking; falls back to
  /// a Picard step when the Newton direction does not reduce the residual.
  kNewton,
};

struct SolverParams {
  double tol{1e-10};
  int max_iterations{200000};
  double damping{0.7};
  IterationScheme scheme{IterationScheme::kGaussSeidel};
  /// p-Laplace coefficient regularization at |grad u| = 0.
  double regularization{1e-12};
  /// |grad u| above this, or a non-finite value, is reported as NoSolution.
  double gradient_cap{1e8};
};

struct SolveResult {
  DiscreteField u;
  double residual{0};
  int iterations{0};
};

/// Solves the discrete problem. Residuals are cell balances divided by the
/// cell area, so they approximate the pointwise PDE residual.
/// Throws NotConverged or NoSolution.
SolveResult fd_solve(const AnnulusGrid& grid, const FluxLaw& law, double C,
                     const RingData& boundary, const SolverParams& params = {});

/// Discrete residual at interior node (i, j). NaN if any stencil value is NaN.
double node_residual(const DiscreteField& u, const FluxLaw& law, double C, int i, int j,
                     double eps = 1e-12);
/// Largest |residual| over interior nodes.
double max_residual(const DiscreteField& u, const FluxLaw& law, double C, double eps = 1e-12);

/// |grad u| = sqrt(u_r^2 + u_theta^2 / sinh^2 r) by central differences,
/// second-order one-sided differences on the boundary rings.
DiscreteField discrete_gradient(const DiscreteField& u);

struct NodeLocation {
  int i{-1};
  int j{-1};
};

struct ComparisonReport {
  bool pass{false};
  double min_margin{0};
  NodeLocation where;
};

/// Discrete comparison principle: with u <= v on every boundary node, passes
/// iff min(v - u) >= -tol. Throws PreconditionError on unordered boundary data.
ComparisonReport comparison_check(const DiscreteField& u, const DiscreteField& v, double tol);

struct GradientBoundReport {
  bool pass{false};
  double interior_max{0};
  double boundary_max{0};
  double bound_factor{0};      // (sup ||Ad||)^2 = e^{2 R_outer}
  double single_factor_ratio{0};  // interior_max / (e^{R_outer} boundary_max), logged only
  double slack{0};
  NodeLocation interior_argmax;
};

/// max interior |grad u| <= e^{2 R_outer} max boundary |grad u| + slack.
/// A negative slack selects the default 10 h^2, h = max(h_r, h_theta).
GradientBoundReport gradient_bound_check(const DiscreteField& u, double R_outer,
                                         double slack = -1.0);

struct TranslationEstimateReport {
  bool pass{false};
  double boundary_lipschitz{0};  // k
  double worst_ratio{0};         // max |u(x1) - u(x2)| / (k d(x1, x2))
  double bound{0};               // e^{2 R_outer}
  int pairs{0};
};

/// Samples node pairs and checks |u(x1) - u(x2)| <= k e^{2 R_outer} d(x1, x2),
/// k the largest difference quotient between interior and boundary nodes.
TranslationEstimateReport translation_estimate_check(const DiscreteField& u, double R_outer,
                                                     int pairs, std::uint64_t seed);

/// Node (i, j) as a half-plane point via the intrinsic polar chart.
HPoint node_point(const AnnulusGrid& g, int i, int j);

/// Tensor-product cubic Lagrange interpolation at polar coordinates
/// (r, theta); NaN outside [r_0, r_nr].
double interpolate(const DiscreteField& u, double r, double theta);

struct TranslateParams {
  double factor{10.0};
  double allowance{0.0};
  /// When positive, replaces factor * baseline + allowance as the threshold.
  double abs_tol{-1.0};
};

struct TranslateReport {
  bool pass{false};
  double baseline_residual{0};    // max |residual| of u itself
  double translated_residual{0};  // max |residual| of u_z on the overlap
  double tolerance{0};
  int overlap_nodes{0};
  int residual_nodes{0};
};

/// Builds u_z(x) = u(z x) on the overlap of the grid with its translate and
/// evaluates the discrete residual there. Throws PreconditionError on an
/// empty overlap.
TranslateReport left_translate_check(const DiscreteField& u, const FluxLaw& law, double C,
                                     const GElem& z, const TranslateParams& params = {});

enum class DecayClass { kToZero, kToPositive, kOther };
std::string to_string(DecayClass c);

struct DecaySource {
  std::string label;
  /// sup over S_R of |grad u|.
  std::function<double(double R)> sphere_sup;
};

DecaySource decay_source(const ScalarField2& f, int n, int samples = 4096);
DecaySource decay_source(const RadialSolution& u);

struct DecayRow {
  std::string label;
  double R{0};
  double indicator{0};  // e^R sup_{S_R} |grad u|
};

struct DecayTable {
  std::vector<DecayRow> rows;
  std::vector<std::pair<std::string, DecayClass>> classes;
};

/// Classification on the last three values of each label: "->0" when
/// non-increasing and below 1e-3 times the first value, "->C>0" when positive
/// and within 5% of each other, otherwise "unbounded/other".
DecayClass classify_decay(const std::vector<double>& values);
DecayTable decay_scan(const std::vector<DecaySource>& family, const std::vector<double>& radii);

}  // namespace hyplab
