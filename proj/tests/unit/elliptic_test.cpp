#include "hyplab/elliptic.hpp"
#include "hyplab/errors.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace hyplab {
namespace {

using testing::uniform;

constexpr double kPi = std::numbers::pi;

RingData constant_rings(const AnnulusGrid& g, double inner, double outer) {
  return RingData::from_functions(g, [=](double) { return inner; }, [=](double) { return outer; });
}

// Largest |residual - expected(r)| over interior nodes of a sampled field.
double residual_error(const AnnulusGrid& g, const FluxLaw& law, double C,
                      const std::function<double(double, double)>& u,
                      const std::function<double(double)>& expected) {
  const DiscreteField f = DiscreteField::sample(g, u);
  double worst = 0.0;
  for (int i = 0; i < g.nr(); ++i) {
    if (g.is_boundary(i)) continue;
    for (int j = 0; j < g.ntheta(); ++j) {
      worst = std::max(worst, std::abs(node_residual(f, law, C, i, j) - expected(g.r(i))));
    }
  }
  return worst;
}

TEST(Grid, Geometry) {
  const AnnulusGrid a = AnnulusGrid::annulus(1.0, 2.0, 16, 32);
  EXPECT_DOUBLE_EQ(a.r(0), 1.0);
  EXPECT_DOUBLE_EQ(a.r(16), 2.0);
  EXPECT_DOUBLE_EQ(a.hr(), 1.0 / 16);
  EXPECT_DOUBLE_EQ(a.htheta(), 2 * kPi / 32);
  EXPECT_TRUE(a.is_boundary(0));
  EXPECT_EQ(a.wrap(-1), 31);
  EXPECT_EQ(a.size(), 17 * 32);

  const AnnulusGrid d = AnnulusGrid::disk(2.0, 16, 32);
  EXPECT_FALSE(d.is_boundary(0));
  EXPECT_DOUBLE_EQ(d.r(16), 2.0);
  EXPECT_NEAR(d.r(0), 0.5 * d.hr(), 1e-15);

  EXPECT_THROW(AnnulusGrid::annulus(1.0, 2.0, 4, 32), ContractViolation);
  EXPECT_THROW(AnnulusGrid::annulus(2.0, 1.0, 8, 8), ContractViolation);
  EXPECT_THROW(AnnulusGrid::disk(2.0, 8, 9), ContractViolation);
}

// Residual of sampled fields against their exact operator values:
// Lap cosh r = 2 cosh r, and div(|grad r| grad r) = coth r for p = 3.
TEST(Residual, ConsistentWithTheContinuousOperator) {
  for (bool disk : {false, true}) {
    double err[2];
    for (int level = 0; level < 2; ++level) {
      const int m = 16 << level;
      const AnnulusGrid g = disk ? AnnulusGrid::disk(2.0, m, m) : AnnulusGrid::annulus(1.0, 2.0, m, m);
      err[level] = residual_error(g, FluxLaw::linear(), 0.5,
                                  [](double r, double) { return std::cosh(r); },
                                  [](double r) { return 2 * std::cosh(r) + 0.5; });
    }
    EXPECT_GT(err[0] / err[1], 3.5) << (disk ? "disk" : "annulus");
    EXPECT_LT(err[1], 1e-2);
  }
  double err[2];
  for (int level = 0; level < 2; ++level) {
    const AnnulusGrid g = AnnulusGrid::annulus(1.0, 2.0, 16 << level, 16 << level);
    err[level] = residual_error(g, FluxLaw::p_laplace(3.0), 0.0, [](double r, double) { return r; },
                                [](double r) { return 1.0 / std::tanh(r); });
  }
  EXPECT_GT(err[0] / err[1], 3.5);
}

TEST(Solve, ConstantDataGivesConstantField) {
  const AnnulusGrid g = AnnulusGrid::annulus(1.0, 2.0, 16, 16);
  SolverParams params;
  params.scheme = IterationScheme::kNewton;
  for (const FluxLaw& law : {FluxLaw::linear(), FluxLaw::p_laplace(3.0), FluxLaw::minimal_surface()}) {
    const SolveResult res = fd_solve(g, law, 0.0, constant_rings(g, 0.4, 0.4), params);
    for (double x : res.u.values) EXPECT_NEAR(x, 0.4, 1e-12) << law.name();
    EXPECT_LE(res.residual, 1e-10);
  }
}

TEST(Solve, SecondOrderAgainstTheRadialSolution) {
  for (const FluxLaw& law : {FluxLaw::linear(), FluxLaw::p_laplace(3.0)}) {
    const RadialSolution oracle = radial_solve(law, 2, 0.1, 1.0, 2.0, 0.0, 1.0);
    double err[2] = {0, 0};
    for (int level = 0; level < 2; ++level) {
      const AnnulusGrid g = AnnulusGrid::annulus(1.0, 2.0, 32 << level, 32 << level);
      SolverParams params;
      params.scheme = IterationScheme::kNewton;
      const SolveResult res = fd_solve(g, law, 0.1, constant_rings(g, 0.0, 1.0), params);
      EXPECT_LE(res.residual, 1e-10);
      for (int i = 0; i <= g.nr(); ++i) {
        const double exact = oracle.value(g.r(i));
        for (int j = 0; j < g.ntheta(); ++j) err[level] = std::max(err[level], std::abs(res.u(i, j) - exact));
      }
    }
    EXPECT_GE(err[0] / err[1], 3.6) << law.name();
    EXPECT_LE(err[0] / err[1], 4.4) << law.name();
  }
}

// Every scheme discretizes the same operator, so they share the solution.
TEST(Solve, SchemesAgree) {
  const AnnulusGrid g = AnnulusGrid::annulus(1.0, 2.0, 12, 16);
  const RingData bd = RingData::from_functions(g, [](double t) { return std::cos(t); },
                                               [](double t) { return 1.0 + 0.5 * std::sin(2 * t); });
  for (const FluxLaw& law : {FluxLaw::linear(), FluxLaw::p_laplace(3.0), FluxLaw::minimal_surface()}) {
    SolverParams params;
    params.tol = 1e-11;
    std::vector<DiscreteField> sols;
    for (IterationScheme s : {IterationScheme::kGaussSeidel, IterationScheme::kPicard,
                              IterationScheme::kNewton}) {
      params.scheme = s;
      sols.push_back(fd_solve(g, law, 0.1, bd, params).u);
    }
    for (std::size_t k = 0; k < sols[0].values.size(); ++k) {
      EXPECT_NEAR(sols[0].values[k], sols[2].values[k], 1e-8) << law.name();
      EXPECT_NEAR(sols[1].values[k], sols[2].values[k], 1e-8) << law.name();
    }
  }
}

TEST(Solve, DiskWithConstantDataIsConstant) {
  const AnnulusGrid g = AnnulusGrid::disk(2.0, 16, 16);
  SolverParams params;
  params.scheme = IterationScheme::kNewton;
  for (const FluxLaw& law : {FluxLaw::linear(), FluxLaw::p_laplace(3.0), FluxLaw::minimal_surface()}) {
    const SolveResult res = fd_solve(g, law, 0.0, constant_rings(g, 0.0, -0.6), params);
    for (double x : res.u.values) EXPECT_NEAR(x, -0.6, 1e-10) << law.name();
  }
}

TEST(Solve, DiscreteMaximumPrinciple) {
  const AnnulusGrid g = AnnulusGrid::annulus(1.0, 2.0, 32, 32);
  auto cosine = [](double t) { return std::cos(t); };
  SolverParams params;
  params.scheme = IterationScheme::kNewton;
  const SolveResult res = fd_solve(g, FluxLaw::linear(), 0.0, RingData::from_functions(g, cosine, cosine), params);
  for (int i = 1; i < g.nr(); ++i) {
    for (int j = 0; j < g.ntheta(); ++j) {
      EXPECT_LE(std::abs(res.u(i, j)), 1.0);
    }
  }
}

TEST(Solve, ReportsFailures) {
  const AnnulusGrid g = AnnulusGrid::annulus(1.0, 2.0, 16, 16);
  SolverParams params;
  params.max_iterations = 2;
  EXPECT_THROW(fd_solve(g, FluxLaw::linear(), 0.0, constant_rings(g, 0.0, 1.0), params), NotConverged);
  params = {};
  params.scheme = IterationScheme::kNewton;
  params.gradient_cap = 0.5;
  EXPECT_THROW(fd_solve(g, FluxLaw::minimal_surface(), 0.0, constant_rings(g, 0.0, 5.0), params),
               NoSolution);
  RingData bad = constant_rings(g, 0.0, 1.0);
  bad.outer.pop_back();
  EXPECT_THROW(fd_solve(g, FluxLaw::linear(), 0.0, bad), ContractViolation);
}

TEST(Gradient, MatchesClosedForms) {
  const AnnulusGrid flat = AnnulusGrid::annulus(1.0, 2.0, 16, 16);
  for (double x : discrete_gradient(DiscreteField(flat, 2.0)).values) EXPECT_EQ(x, 0.0);

  const double C = 1.0;
  double err[2] = {0, 0};
  for (int level = 0; level < 2; ++level) {
    const int m = 32 << level;
    const AnnulusGrid g = AnnulusGrid::annulus(0.5, 2.0, m, m);
    const ScalarField2 v = counterexample(2, C);
    const DiscreteField grad = discrete_gradient(DiscreteField::sample(g, v.value));
    for (int i = 0; i <= g.nr(); ++i) {
      const double exact = C / (2 * (1 + std::cosh(g.r(i))));
      for (int j = 0; j < g.ntheta(); ++j) err[level] = std::max(err[level], std::abs(grad(i, j) - exact));
    }
  }
  EXPECT_GT(err[0] / err[1], 3.5);
  EXPECT_LT(err[1], 1e-3);
}

TEST(Interpolate, ReproducesCubicsInRadius) {
  const AnnulusGrid g = AnnulusGrid::annulus(1.0, 2.0, 16, 16);
  auto cubic = [](double r, double) { return r * r * r - 2 * r + 0.5; };
  const DiscreteField u = DiscreteField::sample(g, cubic);
  std::mt19937_64 rng(41);
  for (int k = 0; k < 200; ++k) {
    const double r = uniform(rng, 1.0, 2.0), theta = uniform(rng, 0, 2 * kPi);
    EXPECT_NEAR(interpolate(u, r, theta), cubic(r, theta), 1e-12);
  }
  EXPECT_TRUE(std::isnan(interpolate(u, 0.9, 0.0)));
  EXPECT_TRUE(std::isnan(interpolate(u, 2.1, 0.0)));
}

TEST(Compare, IdenticalAndShiftedData) {
  const AnnulusGrid g = AnnulusGrid::annulus(1.0, 2.0, 24, 24);
  SolverParams params;
  params.scheme = IterationScheme::kNewton;
  auto in = [](double t) { return std::sin(t); };
  auto out = [](double t) { return 1 + 0.3 * std::cos(3 * t); };
  const DiscreteField u = fd_solve(g, FluxLaw::linear(), 0.0, RingData::from_functions(g, in, out), params).u;
  const ComparisonReport same = comparison_check(u, u, 1e-8);
  EXPECT_TRUE(same.pass);
  EXPECT_EQ(same.min_margin, 0.0);
  EXPECT_EQ(same.where.i, 0);
  EXPECT_EQ(same.where.j, 0);

  const DiscreteField v = fd_solve(g, FluxLaw::linear(), 0.0,
                                   RingData::from_functions(g, [&](double t) { return in(t) + 0.1; },
                                                            [&](double t) { return out(t) + 0.1; }),
                                   params).u;
  // Superposition: v - u solves the homogeneous problem with data 0.1.
  const ComparisonReport shifted = comparison_check(u, v, 1e-8);
  EXPECT_TRUE(shifted.pass);
  EXPECT_GE(shifted.min_margin, 0.1 - 1e-8);
  EXPECT_THROW(comparison_check(v, u, 1e-8), PreconditionError);
}

TEST(Compare, RandomOrderedPairsForPLaplace) {
  const AnnulusGrid g = AnnulusGrid::annulus(1.0, 2.0, 16, 16);
  SolverParams params;
  params.scheme = IterationScheme::kNewton;
  std::mt19937_64 rng(42);
  const FluxLaw law = FluxLaw::p_laplace(3.0);
  for (int k = 0; k < 20; ++k) {
    const double a = uniform(rng, -1, 1), b = uniform(rng, -1, 1), c = uniform(rng, 0, 2 * kPi);
    const double shift = uniform(rng, 0, 0.3);
    auto in = [=](double t) { return a * std::cos(t + c); };
    auto out = [=](double t) { return b * std::sin(2 * t) + 0.5; };
    auto gap = [=](double t) { return shift * (1 + 0.9 * std::cos(t - c)); };
    const DiscreteField u = fd_solve(g, law, 0.0, RingData::from_functions(g, in, out), params).u;
    const DiscreteField v = fd_solve(g, law, 0.0,
                                     RingData::from_functions(g, [&](double t) { return in(t) + gap(t); },
                                                              [&](double t) { return out(t) + gap(t); }),
                                     params).u;
    EXPECT_TRUE(comparison_check(u, v, 1e-8).pass);
  }
}

TEST(GradientBound, ConstantAndSolvedInstance) {
  const AnnulusGrid g = AnnulusGrid::annulus(1.0, 2.0, 32, 32);
  const GradientBoundReport flat = gradient_bound_check(DiscreteField(g, 1.0), 2.0);
  EXPECT_TRUE(flat.pass);
  EXPECT_EQ(flat.interior_max, 0.0);
  EXPECT_EQ(flat.boundary_max, 0.0);

  auto cosine = [](double t) { return std::cos(t); };
  SolverParams params;
  params.scheme = IterationScheme::kNewton;
  const DiscreteField u =
      fd_solve(g, FluxLaw::p_laplace(3.0), 0.0, RingData::from_functions(g, cosine, cosine), params).u;
  const GradientBoundReport rep = gradient_bound_check(u, 2.0);
  EXPECT_TRUE(rep.pass);
  EXPECT_DOUBLE_EQ(rep.bound_factor, std::exp(4.0));
  EXPECT_NEAR(rep.single_factor_ratio, rep.interior_max / (std::exp(2.0) * rep.boundary_max), 1e-15);
  EXPECT_DOUBLE_EQ(rep.slack, 10 * std::pow(2 * kPi / 32, 2));

  const TranslationEstimateReport te = translation_estimate_check(u, 2.0, 500, 42);
  EXPECT_TRUE(te.pass);
  EXPECT_EQ(te.pairs, 500);
  EXPECT_GT(te.boundary_lipschitz, 0.0);
}

TEST(LeftTranslate, IdentityAndHarmonicField) {
  const AnnulusGrid g = AnnulusGrid::annulus(1.0, 2.0, 64, 64 * 6);
  const ScalarField2 v = counterexample(2, 1.0);
  const DiscreteField u = DiscreteField::sample(g, v.value);
  const TranslateReport same = left_translate_check(u, FluxLaw::linear(), 0.0, identity(2));
  EXPECT_NEAR(same.translated_residual, same.baseline_residual, 1e-9);
  EXPECT_EQ(same.overlap_nodes, g.size());

  GElem z(Vec::Constant(1, 0.1), std::exp(0.05));
  const TranslateReport moved = left_translate_check(u, FluxLaw::linear(), 0.0, z);
  EXPECT_LT(moved.overlap_nodes, g.size());
  EXPECT_LT(moved.translated_residual, 1e-4);

  const GElem far(Vec::Constant(1, 0.0), std::exp(10.0));
  EXPECT_THROW(left_translate_check(u, FluxLaw::linear(), 0.0, far), PreconditionError);
}

TEST(Decay, Classification) {
  EXPECT_EQ(classify_decay({1.0, 1e-2, 1e-4, 1e-6}), DecayClass::kToZero);
  EXPECT_EQ(classify_decay({0.0, 0.0, 0.0}), DecayClass::kToZero);
  EXPECT_EQ(classify_decay({0.5, 0.98, 0.99, 1.0}), DecayClass::kToPositive);
  EXPECT_EQ(classify_decay({1.0, 2.0, 4.0}), DecayClass::kOther);
  EXPECT_EQ(to_string(DecayClass::kToZero), "→0");
  EXPECT_EQ(to_string(DecayClass::kToPositive), "→C>0");
  EXPECT_EQ(to_string(DecayClass::kOther), "unbounded/other");
}

TEST(Decay, ScanOfTheReferenceFamily) {
  const RadialSolution radial = radial_solve(FluxLaw::linear(), 2, 0.0, 1.0, 2.0, 0.0, 1.0);
  const DecayTable table = decay_scan(
      {decay_source(constant_field(0.5), 2), decay_source(counterexample(2, 1.0), 2),
       decay_source(radial)},
      {2, 4, 6, 8, 10, 12});
  ASSERT_EQ(table.classes.size(), 3u);
  EXPECT_EQ(table.classes[0].second, DecayClass::kToZero);
  EXPECT_EQ(table.classes[1].second, DecayClass::kToPositive);
  EXPECT_EQ(table.classes[2].second, DecayClass::kToPositive);
  EXPECT_NEAR(table.rows.back().indicator, 2 * radial.flux, 1e-2 * 2 * radial.flux);
}

}  // namespace
}  // namespace hyplab
