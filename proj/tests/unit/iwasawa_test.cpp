#include "hyplab/errors.hpp"
#include "hyplab/iwasawa.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>

namespace hyplab {
namespace {

using testing::random_element;
using testing::random_point;
using testing::relative_gap;

using Map = std::function<HPoint(const HPoint&)>;

// g = (t, s) as the map n_t ∘ a_s of the half space.
Map as_map(const GElem& g) {
  const Map dilate = [s = g.s](const HPoint& p) { return HPoint(s * p.x, s * p.s); };
  const Map shift = [t = g.t](const HPoint& p) { return HPoint(p.x + t, p.s); };
  return [=](const HPoint& p) { return shift(dilate(p)); };
}

// Element reached by composing the maps of g and h and applying them to e.
GElem compose_oracle(const GElem& g, const GElem& h) {
  return to_element(as_map(g)(as_map(h)(origin(g.dim()))));
}

// Largest singular value by power iteration on M^T M.
double power_iteration_norm(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd a = m.transpose() * m;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m.cols());
  double lambda = 0.0;
  for (int it = 0; it < 10000; ++it) {
    const Eigen::VectorXd w = a * v;
    const double next = w.norm();
    v = w / next;
    if (std::abs(next - lambda) <= 1e-16 * next) break;
    lambda = next;
  }
  return std::sqrt((a * v).norm());
}

void expect_elements_near(const GElem& a, const GElem& b, double tol) {
  ASSERT_EQ(a.dim(), b.dim());
  const double scale = std::max({1.0, a.t.norm(), b.t.norm(), a.s, b.s});
  EXPECT_LE((a.t - b.t).norm(), tol * scale);
  EXPECT_LE(std::abs(a.s - b.s), tol * scale);
}

TEST(GroupLaw, MatchesMapComposition) {
  const GElem g(Vec::Constant(1, 1.0), 2.0), h(Vec::Constant(1, 3.0), 4.0);
  const GElem gh = mul(g, h);
  EXPECT_DOUBLE_EQ(gh.t(0), 7.0);
  EXPECT_DOUBLE_EQ(gh.s, 8.0);
  expect_elements_near(gh, compose_oracle(g, h), 0.0);

  std::mt19937_64 rng(1);
  for (int n : {2, 3, 5}) {
    for (int k = 0; k < 200; ++k) {
      const GElem a = random_element(rng, n), b = random_element(rng, n);
      expect_elements_near(mul(a, b), compose_oracle(a, b), 1e-14);
    }
  }
}

TEST(GroupLaw, InverseOfExample) {
  const GElem g(Vec::Constant(1, 3.0), 4.0);
  const GElem gi = inv(g);
  EXPECT_DOUBLE_EQ(gi.t(0), -0.75);
  EXPECT_DOUBLE_EQ(gi.s, 0.25);
  expect_elements_near(mul(g, gi), identity(2), 0.0);
  expect_elements_near(compose_oracle(gi, g), identity(2), 1e-15);
}

TEST(GroupLaw, Axioms) {
  std::mt19937_64 rng(2);
  for (int n : {2, 3, 4}) {
    const GElem e = identity(n);
    for (int k = 0; k < 1000; ++k) {
      const GElem a = random_element(rng, n), b = random_element(rng, n),
                  c = random_element(rng, n);
      expect_elements_near(mul(mul(a, b), c), mul(a, mul(b, c)), 1e-12);
      expect_elements_near(mul(e, a), a, 0.0);
      expect_elements_near(mul(a, e), a, 0.0);
      expect_elements_near(mul(a, inv(a)), e, 1e-12);
      expect_elements_near(mul(inv(a), a), e, 1e-12);
    }
  }
}

TEST(Action, SendsBasePointToTheElement) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const GElem g = random_element(rng, 3);
    const HPoint p = act(g, origin(3));
    EXPECT_EQ(p, to_point(g));
    const HPoint q = random_point(rng, 3);
    EXPECT_EQ(act(identity(3), q), q);
    const HPoint via_map = as_map(g)(q);
    EXPECT_LE((act(g, q).coords() - via_map.coords()).norm(), 1e-14 * via_map.coords().norm());
  }
}

TEST(Action, LeftTranslationsAreIsometries) {
  std::mt19937_64 rng(4);
  for (int n : {2, 3}) {
    for (int k = 0; k < 1000; ++k) {
      const GElem g = random_element(rng, n);
      const HPoint p = random_point(rng, n), q = random_point(rng, n);
      EXPECT_NEAR(distance(act(g, p), act(g, q)), distance(p, q), 1e-10);
    }
  }
}

TEST(Conjugation, ClosedFormAndGroupLaw) {
  const GElem c = conj(GElem(Vec::Constant(1, 1.0), 2.0), GElem(Vec::Constant(1, 3.0), 5.0));
  EXPECT_DOUBLE_EQ(c.t(0), 2.0);
  EXPECT_DOUBLE_EQ(c.s, 5.0);

  std::mt19937_64 rng(5);
  for (int n : {2, 4}) {
    for (int k = 0; k < 300; ++k) {
      const GElem g = random_element(rng, n), h = random_element(rng, n);
      expect_elements_near(conj(g, h), mul(mul(g, h), inv(g)), 1e-13);
      expect_elements_near(conj(identity(n), h), h, 0.0);
    }
  }
}

TEST(Adjoint, ActsAsClosedForm) {
  const double x = 0.7, y = 1.9, a = -0.4, b = 2.5;
  const Eigen::Vector2d image = adjoint(GElem(Vec::Constant(1, x), y)) * Eigen::Vector2d(a, b);
  EXPECT_DOUBLE_EQ(image(0), y * a - x * b);
  EXPECT_DOUBLE_EQ(image(1), b);
  EXPECT_TRUE(adjoint(identity(3)).isIdentity(0.0));
}

// d(C_g)_e by central differences of conj at e.
TEST(Adjoint, IsTheDifferentialOfConjugation) {
  std::mt19937_64 rng(6);
  for (int n : {2, 3}) {
    for (int k = 0; k < 50; ++k) {
      const GElem g = random_element(rng, n);
      Eigen::MatrixXd fd(n, n);
      const double h = 1e-6;
      for (int c = 0; c < n; ++c) {
        const Vec dir = Vec::Unit(n, c);
        auto at = [&](double eps) {
          const GElem p = to_element(HPoint::from_coords(origin(n).coords() + eps * dir));
          return to_point(conj(g, p)).coords();
        };
        fd.col(c) = (at(h) - at(-h)) / (2 * h);
      }
      EXPECT_LE((fd - adjoint(g)).norm(), 1e-8 * std::max(1.0, adjoint(g).norm()));
      EXPECT_NEAR(adjoint(g).determinant(), std::pow(g.s, n - 1), 1e-12 * std::pow(g.s, n - 1));
    }
  }
}

TEST(Adjoint, IsAHomomorphism) {
  std::mt19937_64 rng(7);
  for (int n : {2, 3}) {
    for (int k = 0; k < 1000; ++k) {
      const GElem g = random_element(rng, n), h = random_element(rng, n);
      const Eigen::MatrixXd lhs = adjoint(mul(g, h)), rhs = adjoint(g) * adjoint(h);
      EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, rhs.norm()));
    }
  }
}

TEST(AdNorm, MatchesPowerIteration) {
  const GElem g(Vec::Constant(1, 3.0), 4.0);
  const double oracle = power_iteration_norm(adjoint(g));
  EXPECT_NEAR(ad_norm(g), oracle, 1e-10);
  EXPECT_NEAR(ad_norm(g), 5.0367963, 1e-7);
  EXPECT_DOUBLE_EQ(ad_norm(identity(2)), 1.0);
  for (double R : {0.5, 1.0, 3.0}) {
    EXPECT_NEAR(ad_norm(GElem(Vec::Zero(1), std::exp(R))), std::exp(R), 1e-14 * std::exp(R));
  }
  std::mt19937_64 rng(8);
  for (int n : {2, 3, 5}) {
    for (int k = 0; k < 300; ++k) {
      const GElem x = random_element(rng, n, 3.0, 2.0);
      EXPECT_LE(relative_gap(ad_norm(x), power_iteration_norm(adjoint(x))), 1e-10);
    }
  }
}

// Operator norm of d(R_g)_h between the metrics at h and h g, from a
// central-difference Jacobian of right_act and an SVD.
double right_diff_oracle(const GElem& g, const GElem& h) {
  const int n = g.dim();
  const HPoint base = to_point(h);
  Eigen::MatrixXd jac(n, n);
  const double step = 1e-6 * h.s;
  for (int c = 0; c < n; ++c) {
    const Vec dir = Vec::Unit(n, c) * step;
    jac.col(c) = (right_act(HPoint::from_coords(base.coords() + dir), g).coords() -
                  right_act(HPoint::from_coords(base.coords() - dir), g).coords()) /
                 (2 * step);
  }
  const double image_height = right_act(base, g).s;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac * (h.s / image_height));
  return svd.singularValues()(0);
}

TEST(RightDiffNorm, MatchesJacobianOracleAndIsBasePointFree) {
  std::mt19937_64 rng(9);
  for (int n : {2, 3}) {
    for (int k = 0; k < 20; ++k) {
      const GElem g = random_element(rng, n);
      const double at_e = right_diff_norm(g);
      EXPECT_DOUBLE_EQ(right_diff_norm(identity(n), random_element(rng, n)), 1.0);
      for (int m = 0; m < 100; ++m) {
        const GElem h = random_element(rng, n);
        EXPECT_LE(relative_gap(right_diff_norm(g, h), at_e), 1e-12);
        EXPECT_LE(relative_gap(right_diff_oracle(g, h), at_e), 1e-7);
      }
    }
  }
}

// R(g) is the adjoint norm of the inverse, not of g itself.
TEST(RightDiffNorm, EqualsAdjointNormOfTheInverse) {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 1000; ++k) {
    const GElem g = random_element(rng, 3);
    EXPECT_LE(relative_gap(right_diff_norm(g), ad_norm(inv(g))), 1e-12);
  }
  const GElem dilation(Vec::Zero(1), 2.0);
  EXPECT_DOUBLE_EQ(right_diff_norm(dilation), 1.0);
  EXPECT_DOUBLE_EQ(ad_norm(dilation), 2.0);
}

TEST(RightDiffNorm, BoundsDistortionOfRightTranslation) {
  std::mt19937_64 rng(11);
  for (int n : {2, 3}) {
    for (int k = 0; k < 1000; ++k) {
      const GElem a = random_element(rng, n), b = random_element(rng, n),
                  g = random_element(rng, n);
      const double dab = distance(to_point(a), to_point(b));
      const double dagbg = distance(to_point(mul(a, g)), to_point(mul(b, g)));
      EXPECT_LE(dagbg, right_diff_norm(g) * dab + 1e-10);
      EXPECT_LE(dab, right_diff_norm(inv(g)) * dagbg + 1e-10);
    }
  }
}

TEST(BallSymmetry, InverseIsEquidistantFromIdentity) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 1000; ++k) {
    const GElem g = random_element(rng, 3, 3.0, 2.0);
    EXPECT_NEAR(distance(origin(3), to_point(g)), distance(origin(3), to_point(inv(g))), 1e-10);
  }
}

TEST(BallMax, ClosedForm) {
  EXPECT_DOUBLE_EQ(ad_norm_ball_max(0.0), 1.0);
  EXPECT_NEAR(ad_norm_ball_max(1.0), std::numbers::e, 1e-15);
  EXPECT_THROW(ad_norm_ball_max(-1.0), ContractViolation);
}

TEST(BallMax, GridSearchFindsTheTopPoint) {
  const BallMaxSearch search = ad_norm_ball_max_numeric(2.0, 100, 10000);
  EXPECT_LE(relative_gap(search.value, std::exp(2.0)), 1e-6);
  EXPECT_LE((search.argmax.coords() - point2(0, std::exp(2.0)).coords()).norm(), 1e-2);
  EXPECT_DOUBLE_EQ(ad_norm_ball_max_numeric(0.0).value, 1.0);
}

TEST(BallMax, InteriorStaysBelowTheBoundary) {
  for (double R : {0.5, 2.0}) {
    const ShellScan scan = ad_norm_shell_scan(R, 100, 2000);
    EXPECT_GT(scan.margin(), 0.0);
    EXPECT_NEAR(scan.boundary_max, std::exp(R), 1e-9 * std::exp(R));
  }
}

}  // namespace
}  // namespace hyplab
