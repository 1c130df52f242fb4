#include "hyplab/adjoint_extremes.hpp"
#include "hyplab/errors.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace hyplab {
namespace {

using testing::random_point;
using testing::random_vector;
using testing::uniform;

Geodesic random_geodesic(std::mt19937_64& rng, int n) {
  const HPoint p = random_point(rng, n, 1.0);
  return geodesic_through(p, {p, random_vector(rng, n)});
}

TEST(RightInvariantField, ValueAtIdentity) {
  RightInvField X{Vec(3)};
  X.x << 0.3, -1.2, 0.8;
  const HTangent v = field_eval(X, identity(3));
  EXPECT_EQ(v.v, X.x);
  EXPECT_EQ(v.base, origin(3));
}

// X(g) = d/de R_g(e + eps x) at eps = 0.
TEST(RightInvariantField, IsThePushforwardUnderRightTranslation) {
  std::mt19937_64 rng(21);
  for (int n : {2, 3}) {
    for (int k = 0; k < 100; ++k) {
      const RightInvField X{random_vector(rng, n)};
      const GElem g = testing::random_element(rng, n);
      const double h = 1e-6;
      auto moved = [&](double eps) {
        return right_act(HPoint::from_coords(origin(n).coords() + eps * X.x), g).coords();
      };
      const Vec fd = (moved(h) - moved(-h)) / (2 * h);
      EXPECT_LE((fd - field_eval(X, g).v).norm(), 1e-8 * std::max(1.0, fd.norm()));
    }
  }
}

// Killing: flowing two points along X changes their distance only at second order.
TEST(RightInvariantField, IsKilling) {
  std::mt19937_64 rng(22);
  for (int k = 0; k < 200; ++k) {
    const RightInvField X{random_vector(rng, 2)};
    const HPoint p = random_point(rng, 2), q = random_point(rng, 2);
    auto d = [&](double eps) {
      const HPoint pe = HPoint::from_coords(p.coords() + eps * field_eval(X, p).v);
      const HPoint qe = HPoint::from_coords(q.coords() + eps * field_eval(X, q).v);
      return distance(pe, qe);
    };
    const double h = 1e-5;
    EXPECT_NEAR((d(h) - d(-h)) / (2 * h), 0.0, 1e-6);
  }
}

TEST(NormAlongGeodesic, EqualsAdjointOfInverseAtIdentity) {
  std::mt19937_64 rng(23);
  for (int n : {2, 3}) {
    for (int k = 0; k < 200; ++k) {
      const RightInvField X{random_vector(rng, n)};
      const Geodesic gamma = random_geodesic(rng, n);
      const double tau = uniform(rng, -3, 3);
      const GElem g = to_element(gamma.eval(tau));
      const double via_ad = (adjoint(inv(g)) * X.x).squaredNorm();
      EXPECT_NEAR(norm_sq_along(X, gamma, tau), via_ad, 1e-10 * std::max(1.0, via_ad));
    }
  }
}

TEST(NormAlongGeodesic, SatisfiesTheJacobiEquation) {
  std::mt19937_64 rng(24);
  for (int n : {2, 3}) {
    for (int k = 0; k < 10; ++k) {
      const RightInvField X{random_vector(rng, n)};
      const Geodesic gamma = random_geodesic(rng, n);
      EXPECT_LE(jacobi_residual(X, gamma, -1.0, 1.0, 1e-3), 1e-5);
    }
  }
}

TEST(NormAlongGeodesic, ClosedFormConvexityMatchesFiniteDifferences) {
  std::mt19937_64 rng(25);
  for (int k = 0; k < 200; ++k) {
    const RightInvField X{random_vector(rng, 2)};
    const Geodesic gamma = random_geodesic(rng, 2);
    const double tau = uniform(rng, -2, 2);
    const double exact = jacobi_convexity(X, gamma, tau);
    EXPECT_NEAR(convexity_at(X, gamma, tau), exact, 1e-5 * std::max(1.0, exact));
  }
}

TEST(CriticalPoints, AreStrictMinima) {
  std::mt19937_64 rng(26);
  int located = 0;
  for (int attempt = 0; attempt < 2000 && located < 100; ++attempt) {
    const RightInvField X{random_vector(rng, 2)};
    const Geodesic gamma = random_geodesic(rng, 2);
    for (double tau : critical_scan(X, gamma, -3.0, 3.0)) {
      ++located;
      EXPECT_GE(convexity_at(X, gamma, tau), 1e-6);
      EXPECT_GT(jacobi_convexity(X, gamma, tau), 0.0);
    }
  }
  EXPECT_GE(located, 100);
}

TEST(CriticalPoints, MonotoneNormHasNone) {
  // X = (1, 0) on the upward vertical ray: |X|^2 = e^{-2 tau}.
  const RightInvField X{Vec::Unit(2, 0)};
  const HPoint e = origin(2);
  const Geodesic up = geodesic_through(e, {e, Vec::Unit(2, 1)});
  EXPECT_TRUE(critical_scan(X, up, -2.0, 2.0).empty());
  EXPECT_NEAR(norm_sq_along(X, up, 0.7), std::exp(-1.4), 1e-14);
}

TEST(ParallelTransport, KeepsFramesOrthonormal) {
  std::mt19937_64 rng(27);
  const Geodesic gamma = random_geodesic(rng, 3);
  const TransportedFrames tf = parallel_transport(gamma, 0.0, 2.0, 1e-3);
  ASSERT_EQ(tf.tau.size(), tf.frames.size());
  for (std::size_t k = 0; k < tf.tau.size(); k += 250) {
    const double s = gamma.eval(tf.tau[k]).s;
    const Eigen::MatrixXd gram = tf.frames[k].transpose() * tf.frames[k] / (s * s);
    EXPECT_LE((gram - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-10);
  }
  EXPECT_THROW(parallel_transport(gamma, 1.0, 1.0), ContractViolation);
}

}  // namespace
}  // namespace hyplab
