#include "hyplab/elliptic.hpp"

#include "hyplab/errors.hpp"
#include "hyplab/halfspace.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace hyplab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Value at ring i (possibly -1 on disks, reflected through the pole).
double ring_value(const DiscreteField& u, int i, int j) {
  const AnnulusGrid& g = u.grid;
  if (i < 0) return u(0, j + g.ntheta() / 2);
  return u(i, j);
}

// One control-volume face: flux w c(|grad u|) D with D the difference of the
// two adjacent nodes, plus what Newton needs to differentiate it. The
// gradient norm combines the two-point normal difference with a four-node
// tangential average.
struct Face {
  double w{0};  // geometric weight (face length over node distance)
  double c{1};  // a(g)/g
  double dc{0};
  double D{0};
  double len{1};  // D = len * gn
  double gn{0}, gt{0}, g{0};
  bool active{false};
  std::array<std::pair<int, int>, 6> node{};
  std::array<double, 6> dgn{}, dgt{};

  double conductance() const { return active ? w * c : 0.0; }
  double flux() const { return active ? w * c * D : 0.0; }
  // d flux / d u at node[k].
  double derivative(int k) const {
    const auto kk = static_cast<std::size_t>(k);
    double d = w * c * dgn[kk] * len;
    if (g > 0.0) d += w * dc * D * (gn * dgn[kk] + gt * dgt[kk]) / g;
    return d;
  }
};

// Face between rings lo and lo + 1 at angle j.
Face radial_face(const DiscreteField& u, const FluxLaw& law, int lo, int j, double eps) {
  const AnnulusGrid& g = u.grid;
  Face f;
  if (g.is_disk() && lo < 0) return f;  // the face at the pole carries no flux
  auto v = [&](int a, int b) { return ring_value(u, a, b); };
  const double hr = g.hr(), ht = g.htheta();
  const double sf = std::sinh(g.r(0) + (lo + 0.5) * hr);
  const double ts = 1.0 / (4.0 * ht * sf);
  f.active = true;
  f.w = sf * ht / hr;
  f.len = hr;
  f.D = v(lo + 1, j) - v(lo, j);
  f.gn = f.D / hr;
  f.gt = (v(lo, j + 1) - v(lo, j - 1) + v(lo + 1, j + 1) - v(lo + 1, j - 1)) * ts;
  f.node = {{{lo + 1, j}, {lo, j}, {lo, j + 1}, {lo, j - 1}, {lo + 1, j + 1}, {lo + 1, j - 1}}};
  f.dgn = {1.0 / hr, -1.0 / hr, 0.0, 0.0, 0.0, 0.0};
  f.dgt = {0.0, 0.0, ts, -ts, ts, -ts};
  f.g = std::hypot(f.gn, f.gt);
  f.c = law.coefficient(f.g, eps);
  f.dc = law.coefficient_derivative(f.g, eps);
  return f;
}

// Face between angles jl and jl + 1 on ring i.
Face angular_face(const DiscreteField& u, const FluxLaw& law, int i, int jl, double eps) {
  const AnnulusGrid& g = u.grid;
  Face f;
  auto v = [&](int a, int b) { return ring_value(u, a, b); };
  const double hr = g.hr(), ht = g.htheta();
  const double si = std::sinh(g.r(i));
  const double ns = 1.0 / (ht * si), ts = 1.0 / (4.0 * hr);
  f.active = true;
  f.w = hr * ns;
  f.len = ht * si;
  f.D = v(i, jl + 1) - v(i, jl);
  f.gn = f.D * ns;
  f.gt = (v(i + 1, jl) - v(i - 1, jl) + v(i + 1, jl + 1) - v(i - 1, jl + 1)) * ts;
  f.node = {{{i, jl + 1}, {i, jl}, {i + 1, jl}, {i - 1, jl}, {i + 1, jl + 1}, {i - 1, jl + 1}}};
  f.dgn = {ns, -ns, 0.0, 0.0, 0.0, 0.0};
  f.dgt = {0.0, 0.0, ts, -ts, ts, -ts};
  f.g = std::hypot(f.gn, f.gt);
  f.c = law.coefficient(f.g, eps);
  f.dc = law.coefficient_derivative(f.g, eps);
  return f;
}

struct Faces {
  // Conductances w * c for the four faces (outer, inner, plus, minus).
  double out{0}, in{0}, plus{0}, minus{0};
  double max_gradient{0};
};

Faces face_conductances(const DiscreteField& u, const FluxLaw& law, int i, int j, double eps) {
  const Face fo = radial_face(u, law, i, j, eps);
  const Face fi = radial_face(u, law, i - 1, j, eps);
  const Face fp = angular_face(u, law, i, j, eps);
  const Face fm = angular_face(u, law, i, j - 1, eps);
  Faces f;
  f.out = fo.conductance();
  f.in = fi.conductance();
  f.plus = fp.conductance();
  f.minus = fm.conductance();
  for (const Face* x : {&fo, &fi, &fp, &fm}) {
    if (x->active) f.max_gradient = std::max(f.max_gradient, x->g);
  }
  return f;
}

double cell_area(const AnnulusGrid& g, int i) { return std::sinh(g.r(i)) * g.hr() * g.htheta(); }

double balance(const DiscreteField& u, const Faces& f, double C, int i, int j) {
  const double c = u(i, j);
  const double b = f.out * (ring_value(u, i + 1, j) - c) + f.in * (ring_value(u, i - 1, j) - c) +
                   f.plus * (u(i, j + 1) - c) + f.minus * (u(i, j - 1) - c);
  return b / cell_area(u.grid, i) + C;
}

int first_interior(const AnnulusGrid& g) { return g.is_disk() ? 0 : 1; }

void check_boundary(const AnnulusGrid& g, const RingData& bd) {
  const auto nt = static_cast<std::size_t>(g.ntheta());
  if (bd.outer.size() != nt) throw ContractViolation("fd_solve: outer ring data has wrong size");
  if (!g.is_disk() && bd.inner.size() != nt) {
    throw ContractViolation("fd_solve: inner ring data has wrong size");
  }
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(bd.outer) || (!g.is_disk() && !finite(bd.inner))) {
    throw ContractViolation("fd_solve: non-finite boundary data");
  }
}

struct Sweep {
  double residual{0};
  double max_gradient{0};
};

Sweep sweep_stats(const DiscreteField& u, const FluxLaw& law, double C, double eps) {
  Sweep s;
  const AnnulusGrid& g = u.grid;
  for (int i = first_interior(g); i < g.nr(); ++i) {
    for (int j = 0; j < g.ntheta(); ++j) {
      const Faces f = face_conductances(u, law, i, j, eps);
      const double r = balance(u, f, C, i, j);
      if (!std::isfinite(r)) {
        s.residual = std::numeric_limits<double>::infinity();
      } else {
        s.residual = std::max(s.residual, std::abs(r));
      }
      s.max_gradient = std::max(s.max_gradient, f.max_gradient);
    }
  }
  return s;
}

void guard(const Sweep& s, const SolverParams& params, const AnnulusGrid& g) {
  if (!std::isfinite(s.residual) || !(s.max_gradient <= params.gradient_cap)) {
    std::ostringstream msg;
    msg << "fd_solve: gradient saturation (|grad u| = " << s.max_gradient << ")";
    throw NoSolution(msg.str(), g.r_outer());
  }
}

void gauss_seidel(DiscreteField& u, const FluxLaw& law, double C, const SolverParams& params,
                  SolveResult& out) {
  const AnnulusGrid& g = u.grid;
  const double w = params.damping;
  for (int it = 1; it <= params.max_iterations; ++it) {
    for (int colour = 0; colour < 2; ++colour) {
      for (int i = first_interior(g); i < g.nr(); ++i) {
        for (int j = (i + colour) % 2; j < g.ntheta(); j += 2) {
          const Faces f = face_conductances(u, law, i, j, params.regularization);
          const double diag = f.out + f.in + f.plus + f.minus;
          const double rhs = f.out * ring_value(u, i + 1, j) + f.in * ring_value(u, i - 1, j) +
                             f.plus * u(i, j + 1) + f.minus * u(i, j - 1) +
                             C * cell_area(g, i);
          double& c = u(i, j);
          c += w * (rhs / diag - c);
        }
      }
    }
    // The residual sweep costs as much as an update; check every few sweeps.
    if (it % 16 == 0 || it == params.max_iterations) {
      const Sweep s = sweep_stats(u, law, C, params.regularization);
      guard(s, params, g);
      out.residual = s.residual;
      out.iterations = it;
      if (s.residual <= params.tol) return;
    }
  }
}

// One frozen-coefficient linear solve; returns the linearized field.
std::vector<double> picard_step(const DiscreteField& u, const FluxLaw& law, double C,
                                double eps) {
  const AnnulusGrid& g = u.grid;
  const int i0 = first_interior(g);
  const int nt = g.ntheta();
  const int unknowns = (g.nr() - i0) * nt;
  auto idx = [&](int i, int j) { return (i - i0) * nt + g.wrap(j); };

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(unknowns) * 5);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns);
  for (int i = i0; i < g.nr(); ++i) {
    for (int j = 0; j < nt; ++j) {
      const Faces f = face_conductances(u, law, i, j, eps);
      const int row = idx(i, j);
      entries.emplace_back(row, row, f.out + f.in + f.plus + f.minus);
      rhs[row] += C * cell_area(g, i);
      auto couple = [&](int a, int b, double wgt) {
        if (wgt == 0.0) return;
        if (a < 0) {
          a = 0;
          b += nt / 2;
        }
        if (g.is_boundary(a)) {
          rhs[row] += wgt * u(a, b);
        } else {
          entries.emplace_back(row, idx(a, b), -wgt);
        }
      };
      couple(i + 1, j, f.out);
      couple(i - 1, j, f.in);
      couple(i, j + 1, f.plus);
      couple(i, j - 1, f.minus);
    }
  }
  Eigen::SparseMatrix<double> A(unknowns, unknowns);
  A.setFromTriplets(entries.begin(), entries.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success) {
    throw NotConverged("fd_solve: factorization failed", kNaN, 0);
  }
  const Eigen::VectorXd x = solver.solve(rhs);
  std::vector<double> out(u.values);
  for (int i = i0; i < g.nr(); ++i) {
    for (int j = 0; j < nt; ++j) out[static_cast<std::size_t>(g.index(i, j))] = x[idx(i, j)];
  }
  return out;
}

// Moves u toward `target` with steps 1, 1/2, 1/4, ... until the max residual
// drops. Leaves u unchanged and returns false when no step of at least 2^-30
// helps (roundoff floor or a stalled iteration).
bool damped_update(DiscreteField& u, const std::vector<double>& target, const FluxLaw& law,
                   double C, const SolverParams& params, Sweep& current) {
  const std::vector<double> start = u.values;
  double step = 1.0;
  for (int halvings = 0; halvings <= 30; ++halvings, step *= 0.5) {
    for (std::size_t k = 0; k < start.size(); ++k) {
      u.values[k] = start[k] + step * (target[k] - start[k]);
    }
    const Sweep trial = sweep_stats(u, law, C, params.regularization);
    const bool ok = std::isfinite(trial.residual) && trial.max_gradient <= params.gradient_cap;
    if (ok && trial.residual < current.residual) {
      current = trial;
      return true;
    }
  }
  u.values = start;
  return false;
}

void picard(DiscreteField& u, const FluxLaw& law, double C, const SolverParams& params,
            SolveResult& out) {
  Sweep current = sweep_stats(u, law, C, params.regularization);
  guard(current, params, u.grid);
  out.residual = current.residual;
  for (int it = 1; it <= params.max_iterations; ++it) {
    if (current.residual <= params.tol) return;
    const std::vector<double> target = picard_step(u, law, C, params.regularization);
    if (!damped_update(u, target, law, C, params, current)) return;
    out.residual = current.residual;
    out.iterations = it;
  }
}

// Full Newton step on the cell balances; empty when the Jacobian is singular.
std::vector<double> newton_step(const DiscreteField& u, const FluxLaw& law, double C,
                                double eps) {
  const AnnulusGrid& g = u.grid;
  const int i0 = first_interior(g);
  const int nt = g.ntheta();
  const int unknowns = (g.nr() - i0) * nt;
  auto idx = [&](int i, int j) { return (i - i0) * nt + g.wrap(j); };

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(unknowns) * 24);
  Eigen::VectorXd rhs(unknowns);
  for (int i = i0; i < g.nr(); ++i) {
    for (int j = 0; j < nt; ++j) {
      const int row = idx(i, j);
      const std::array<Face, 4> faces{radial_face(u, law, i, j, eps),
                                      radial_face(u, law, i - 1, j, eps),
                                      angular_face(u, law, i, j, eps),
                                      angular_face(u, law, i, j - 1, eps)};
      constexpr std::array<double, 4> sign{1.0, -1.0, 1.0, -1.0};
      double balance_ij = C * cell_area(g, i);
      for (std::size_t f = 0; f < 4; ++f) {
        if (!faces[f].active) continue;
        balance_ij += sign[f] * faces[f].flux();
        for (int k = 0; k < 6; ++k) {
          const double d = sign[f] * faces[f].derivative(k);
          auto [a, b] = faces[f].node[static_cast<std::size_t>(k)];
          if (a < 0) {
            a = 0;
            b += nt / 2;
          }
          if (d == 0.0 || g.is_boundary(a)) continue;
          entries.emplace_back(row, idx(a, b), d);
        }
      }
      rhs[row] = -balance_ij;
    }
  }
  Eigen::SparseMatrix<double> J(unknowns, unknowns);
  J.setFromTriplets(entries.begin(), entries.end());
  J.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
  solver.compute(J);
  if (solver.info() != Eigen::Success) return {};
  const Eigen::VectorXd dx = solver.solve(rhs);
  if (solver.info() != Eigen::Success || !dx.allFinite()) return {};
  std::vector<double> out(u.values);
  for (int i = i0; i < g.nr(); ++i) {
    for (int j = 0; j < nt; ++j) out[static_cast<std::size_t>(g.index(i, j))] += dx[idx(i, j)];
  }
  return out;
}

void newton(DiscreteField& u, const FluxLaw& law, double C, const SolverParams& params,
            SolveResult& out) {
  Sweep current = sweep_stats(u, law, C, params.regularization);
  guard(current, params, u.grid);
  out.residual = current.residual;
  for (int it = 1; it <= params.max_iterations; ++it) {
    if (current.residual <= params.tol) return;
    const std::vector<double> target = newton_step(u, law, C, params.regularization);
    const bool moved = !target.empty() && damped_update(u, target, law, C, params, current);
    // Far from the solution, or where the Jacobian degenerates, fall back to
    // a frozen-coefficient step.
    if (!moved &&
        !damped_update(u, picard_step(u, law, C, params.regularization), law, C, params, current)) {
      return;
    }
    out.residual = current.residual;
    out.iterations = it;
  }
}

// Uniform on [0, 1) from the top 53 bits; the same on every platform.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<NodeLocation> boundary_nodes(const AnnulusGrid& g) {
  std::vector<NodeLocation> out;
  for (int i = 0; i <= g.nr(); ++i) {
    if (!g.is_boundary(i)) continue;
    for (int j = 0; j < g.ntheta(); ++j) out.push_back({i, j});
  }
  return out;
}

std::vector<NodeLocation> interior_nodes(const AnnulusGrid& g) {
  std::vector<NodeLocation> out;
  for (int i = first_interior(g); i < g.nr(); ++i) {
    for (int j = 0; j < g.ntheta(); ++j) out.push_back({i, j});
  }
  return out;
}

// Cubic Lagrange weights for nodes at offsets -1, 0, 1, 2 and position t in [0, 1].
std::array<double, 4> lagrange4(double t) {
  return {-t * (t - 1.0) * (t - 2.0) / 6.0, (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
          -(t + 1.0) * t * (t - 2.0) / 2.0, (t + 1.0) * t * (t - 1.0) / 6.0};
}

// Weights for nodes k0..k0+3 at fractional index x, k0 clamped to [0, n-3].
std::pair<int, std::array<double, 4>> stencil(double x, int n) {
  int k0 = static_cast<int>(std::floor(x)) - 1;
  k0 = std::clamp(k0, 0, n - 3);
  const double t = x - (k0 + 1);
  return {k0, lagrange4(t)};
}

}  // namespace

AnnulusGrid::AnnulusGrid(double r_inner, double r_outer, int nr, int ntheta, bool disk)
    : r_inner_(r_inner), r_outer_(r_outer), nr_(nr), ntheta_(ntheta), disk_(disk) {
  if (nr < 8 || ntheta < 8) throw ContractViolation("AnnulusGrid: need nr, ntheta >= 8");
  if (disk) {
    if (!(r_outer > 0.0)) throw ContractViolation("AnnulusGrid: disk radius must be positive");
    if (ntheta % 2 != 0) throw ContractViolation("AnnulusGrid: disk grids need an even ntheta");
    hr_ = r_outer / (nr + 0.5);
    r_inner_ = 0.5 * hr_;
  } else {
    if (!(r_inner > 0.0) || !(r_outer > r_inner)) {
      throw ContractViolation("AnnulusGrid: need 0 < r_inner < r_outer");
    }
    hr_ = (r_outer - r_inner) / nr;
  }
  htheta_ = 2.0 * std::numbers::pi / ntheta;
}

AnnulusGrid AnnulusGrid::annulus(double r_inner, double r_outer, int nr, int ntheta) {
  return AnnulusGrid(r_inner, r_outer, nr, ntheta, false);
}

AnnulusGrid AnnulusGrid::disk(double r_outer, int nr, int ntheta) {
  return AnnulusGrid(0.0, r_outer, nr, ntheta, true);
}

double AnnulusGrid::r(int i) const {
  if (i == nr_) return r_outer_;
  return r_inner_ + i * hr_;
}

double AnnulusGrid::theta(int j) const { return wrap(j) * htheta_; }

DiscreteField DiscreteField::sample(const AnnulusGrid& g,
                                    const std::function<double(double, double)>& f) {
  DiscreteField u(g);
  for (int i = 0; i <= g.nr(); ++i) {
    for (int j = 0; j < g.ntheta(); ++j) u(i, j) = f(g.r(i), g.theta(j));
  }
  return u;
}

RingData RingData::from_functions(const AnnulusGrid& g, const std::function<double(double)>& inner,
                                  const std::function<double(double)>& outer) {
  RingData bd;
  for (int j = 0; j < g.ntheta(); ++j) {
    if (!g.is_disk()) bd.inner.push_back(inner(g.theta(j)));
    bd.outer.push_back(outer(g.theta(j)));
  }
  return bd;
}

SolveResult fd_solve(const AnnulusGrid& grid, const FluxLaw& law, double C,
                     const RingData& boundary, const SolverParams& params) {
  check_boundary(grid, boundary);
  if (!(params.tol > 0.0) || params.max_iterations < 1 || !(params.damping > 0.0) ||
      !(params.damping <= 2.0)) {
    throw ContractViolation("fd_solve: invalid solver parameters");
  }
  SolveResult out{DiscreteField(grid), 0.0, 0};
  DiscreteField& u = out.u;

  // Start from the angular average interpolated linearly in r.
  double outer_mean = 0.0, inner_mean = 0.0;
  for (int j = 0; j < grid.ntheta(); ++j) {
    outer_mean += boundary.outer[static_cast<std::size_t>(j)];
    if (!grid.is_disk()) inner_mean += boundary.inner[static_cast<std::size_t>(j)];
  }
  outer_mean /= grid.ntheta();
  inner_mean = grid.is_disk() ? outer_mean : inner_mean / grid.ntheta();
  for (int i = 0; i <= grid.nr(); ++i) {
    const double t = static_cast<double>(i) / grid.nr();
    for (int j = 0; j < grid.ntheta(); ++j) u(i, j) = (1.0 - t) * inner_mean + t * outer_mean;
  }
  for (int j = 0; j < grid.ntheta(); ++j) {
    u(grid.nr(), j) = boundary.outer[static_cast<std::size_t>(j)];
    if (!grid.is_disk()) u(0, j) = boundary.inner[static_cast<std::size_t>(j)];
  }

  if (params.scheme == IterationScheme::kNewton) {
    newton(u, law, C, params, out);
  } else if (params.scheme == IterationScheme::kPicard) {
    picard(u, law, C, params, out);
  } else {
    gauss_seidel(u, law, C, params, out);
  }
  if (!(out.residual <= params.tol)) {
    std::ostringstream msg;
    msg << "fd_solve: residual " << out.residual << " after " << out.iterations << " iterations";
    throw NotConverged(msg.str(), out.residual, out.iterations);
  }
  return out;
}

double node_residual(const DiscreteField& u, const FluxLaw& law, double C, int i, int j,
                     double eps) {
  const AnnulusGrid& g = u.grid;
  if (i < first_interior(g) || i >= g.nr()) {
    throw ContractViolation("node_residual: not an interior node");
  }
  const Faces f = face_conductances(u, law, i, j, eps);
  return balance(u, f, C, i, j);
}

double max_residual(const DiscreteField& u, const FluxLaw& law, double C, double eps) {
  double worst = 0.0;
  for (const NodeLocation& n : interior_nodes(u.grid)) {
    const double r = node_residual(u, law, C, n.i, n.j, eps);
    if (std::isnan(r)) return kNaN;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

DiscreteField discrete_gradient(const DiscreteField& u) {
  const AnnulusGrid& g = u.grid;
  DiscreteField out(g);
  const double hr = g.hr(), ht = g.htheta();
  for (int i = 0; i <= g.nr(); ++i) {
    const double s = std::sinh(g.r(i));
    for (int j = 0; j < g.ntheta(); ++j) {
      double ur;
      if (i == 0 && !g.is_disk()) {
        ur = (-3.0 * u(0, j) + 4.0 * u(1, j) - u(2, j)) / (2.0 * hr);
      } else if (i == g.nr()) {
        ur = (3.0 * u(i, j) - 4.0 * u(i - 1, j) + u(i - 2, j)) / (2.0 * hr);
      } else {
        ur = (u(i + 1, j) - ring_value(u, i - 1, j)) / (2.0 * hr);
      }
      const double ut = (u(i, j + 1) - u(i, j - 1)) / (2.0 * ht);
      out(i, j) = std::hypot(ur, ut / s);
    }
  }
  return out;
}

ComparisonReport comparison_check(const DiscreteField& u, const DiscreteField& v, double tol) {
  if (!(u.grid == v.grid)) throw PreconditionError("comparison_check: fields on different grids");
  const AnnulusGrid& g = u.grid;
  for (const NodeLocation& n : boundary_nodes(g)) {
    if (u(n.i, n.j) > v(n.i, n.j)) {
      std::ostringstream msg;
      msg << "comparison_check: boundary data not ordered at node (" << n.i << ", " << n.j << ")";
      throw PreconditionError(msg.str());
    }
  }
  ComparisonReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= g.nr(); ++i) {
    for (int j = 0; j < g.ntheta(); ++j) {
      const double m = v(i, j) - u(i, j);
      if (m < rep.min_margin) {
        rep.min_margin = m;
        rep.where = {i, j};
      }
    }
  }
  rep.pass = rep.min_margin >= -tol;
  return rep;
}

GradientBoundReport gradient_bound_check(const DiscreteField& u, double R_outer, double slack) {
  const AnnulusGrid& g = u.grid;
  const DiscreteField grad = discrete_gradient(u);
  GradientBoundReport rep;
  for (int i = 0; i <= g.nr(); ++i) {
    for (int j = 0; j < g.ntheta(); ++j) {
      const double v = grad(i, j);
      if (g.is_boundary(i)) {
        rep.boundary_max = std::max(rep.boundary_max, v);
      } else if (v > rep.interior_max || rep.interior_argmax.i < 0) {
        rep.interior_max = v;
        rep.interior_argmax = {i, j};
      }
    }
  }
  const double h = std::max(g.hr(), g.htheta());
  rep.slack = slack < 0.0 ? 10.0 * h * h : slack;
  rep.bound_factor = std::exp(2.0 * R_outer);
  rep.single_factor_ratio = rep.boundary_max > 0.0
                                ? rep.interior_max / (std::exp(R_outer) * rep.boundary_max)
                                : (rep.interior_max > 0.0 ? std::numeric_limits<double>::infinity()
                                                          : 0.0);
  rep.pass = rep.interior_max <= rep.bound_factor * rep.boundary_max + rep.slack;
  return rep;
}

HPoint node_point(const AnnulusGrid& g, int i, int j) { return polar_chart(g.r(i), g.theta(j)); }

TranslationEstimateReport translation_estimate_check(const DiscreteField& u, double R_outer,
                                                     int pairs, std::uint64_t seed) {
  const AnnulusGrid& g = u.grid;
  if (pairs < 1) throw ContractViolation("translation_estimate_check: need at least one pair");
  const auto inner = interior_nodes(g);
  const auto bnd = boundary_nodes(g);
  if (inner.empty() || bnd.empty()) throw PreconditionError("translation_estimate_check: no nodes");

  std::vector<HPoint> inner_pts, bnd_pts;
  inner_pts.reserve(inner.size());
  for (const auto& n : inner) inner_pts.push_back(node_point(g, n.i, n.j));
  bnd_pts.reserve(bnd.size());
  for (const auto& n : bnd) bnd_pts.push_back(node_point(g, n.i, n.j));

  TranslationEstimateReport rep;
  // k over interior x boundary pairs, thinned by a fixed stride on large grids.
  const std::size_t total = inner.size() * bnd.size();
  const std::size_t stride = std::max<std::size_t>(1, total / 2000000);
  for (std::size_t k = 0; k < total; k += stride) {
    const std::size_t a = k / bnd.size(), b = k % bnd.size();
    const double d = distance(inner_pts[a], bnd_pts[b]);
    if (d <= 0.0) continue;
    const double q = std::abs(u(inner[a].i, inner[a].j) - u(bnd[b].i, bnd[b].j)) / d;
    rep.boundary_lipschitz = std::max(rep.boundary_lipschitz, q);
  }
  rep.bound = std::exp(2.0 * R_outer);

  std::mt19937_64 rng(seed);
  const std::size_t all = inner.size();
  for (int p = 0; p < pairs; ++p) {
    const auto a = static_cast<std::size_t>(uniform01(rng) * all);
    const auto b = static_cast<std::size_t>(uniform01(rng) * all);
    const double d = distance(inner_pts[a], inner_pts[b]);
    const double du = std::abs(u(inner[a].i, inner[a].j) - u(inner[b].i, inner[b].j));
    ++rep.pairs;
    if (d <= 0.0) continue;
    const double ratio = rep.boundary_lipschitz > 0.0
                             ? du / (rep.boundary_lipschitz * d)
                             : (du > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
  }
  rep.pass = rep.worst_ratio <= rep.bound * (1.0 + 1e-12);
  return rep;
}

double interpolate(const DiscreteField& u, double r, double theta) {
  const AnnulusGrid& g = u.grid;
  // Radii recovered from a chart round trip may overshoot an end ring by a
  // few ulps; those still count as on the ring.
  const double slack = 1e-9 * g.hr();
  const double r_lo = g.r(0), r_hi = g.r(g.nr());
  if (!(r >= r_lo - slack && r <= r_hi + slack)) return kNaN;
  r = std::clamp(r, r_lo, r_hi);
  const auto [i0, wr] = stencil((r - r_lo) / g.hr(), g.nr());
  const double x = theta / g.htheta();
  const int j1 = static_cast<int>(std::floor(x));
  const auto wt = lagrange4(x - j1);
  double sum = 0.0;
  for (int a = 0; a < 4; ++a) {
    double row = 0.0;
    for (int b = 0; b < 4; ++b) row += wt[static_cast<std::size_t>(b)] * u(i0 + a, j1 - 1 + b);
    sum += wr[static_cast<std::size_t>(a)] * row;
  }
  return sum;
}

TranslateReport left_translate_check(const DiscreteField& u, const FluxLaw& law, double C,
                                     const GElem& z, const TranslateParams& params) {
  if (z.dim() != 2) throw ContractViolation("left_translate_check: grids live in H^2");
  const AnnulusGrid& g = u.grid;
  TranslateReport rep;
  rep.baseline_residual = max_residual(u, law, C);

  DiscreteField uz(g, kNaN);
  for (int i = 0; i <= g.nr(); ++i) {
    for (int j = 0; j < g.ntheta(); ++j) {
      const auto [r, th] = polar_chart_inv(act(z, node_point(g, i, j)));
      const double val = interpolate(u, r, th);
      if (std::isfinite(val)) {
        uz(i, j) = val;
        ++rep.overlap_nodes;
      }
    }
  }
  if (rep.overlap_nodes == 0) throw PreconditionError("left_translate_check: empty overlap");

  for (const NodeLocation& n : interior_nodes(g)) {
    const double res = node_residual(uz, law, C, n.i, n.j);
    if (std::isnan(res)) continue;
    ++rep.residual_nodes;
    rep.translated_residual = std::max(rep.translated_residual, std::abs(res));
  }
  if (rep.residual_nodes == 0) {
    throw PreconditionError("left_translate_check: overlap has no complete stencil");
  }
  rep.tolerance = params.abs_tol > 0.0
                      ? params.abs_tol
                      : params.factor * rep.baseline_residual + params.allowance;
  rep.pass = rep.translated_residual <= rep.tolerance;
  return rep;
}

std::string to_string(DecayClass c) {
  switch (c) {
    case DecayClass::kToZero: return "→0";
    case DecayClass::kToPositive: return "→C>0";
    case DecayClass::kOther: return "unbounded/other";
  }
  return "unbounded/other";
}

DecaySource decay_source(const ScalarField2& f, int n, int samples) {
  return {f.name, [f, n, samples](double R) {
            return decay_indicator(f, n, R, samples) * std::exp(-R);
          }};
}

DecaySource decay_source(const RadialSolution& u) {
  std::ostringstream label;
  label << "radial " << u.law.name() << " n=" << u.n;
  return {label.str(), [u](double R) { return std::abs(u.gradient(R)); }};
}

DecayClass classify_decay(const std::vector<double>& values) {
  if (values.size() < 3) return DecayClass::kOther;
  const std::size_t m = values.size();
  const double a = values[m - 3], b = values[m - 2], c = values[m - 1];
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) return DecayClass::kOther;
  if (a >= b && b >= c && c <= 1e-3 * values.front()) return DecayClass::kToZero;
  if (a == 0.0 && b == 0.0 && c == 0.0) return DecayClass::kToZero;
  const double hi = std::max({a, b, c}), lo = std::min({a, b, c});
  if (lo > 0.0 && hi - lo <= 0.05 * hi) return DecayClass::kToPositive;
  return DecayClass::kOther;
}

DecayTable decay_scan(const std::vector<DecaySource>& family, const std::vector<double>& radii) {
  DecayTable table;
  for (const DecaySource& src : family) {
    std::vector<double> values;
    for (double R : radii) {
      double v;
      try {
        v = std::exp(R) * src.sphere_sup(R);
      } catch (const NoSolution&) {
        v = std::numeric_limits<double>::infinity();
      }
      values.push_back(v);
      table.rows.push_back({src.label, R, v});
    }
    table.classes.emplace_back(src.label, classify_decay(values));
  }
  return table;
}

}  // namespace hyplab
