#include <gtest/gtest.h>

#include "hejhal_lab/quadrature.hpp"
#include "test_domains.hpp"

using namespace hejhal_lab;
using namespace hejhal_lab::testing;

namespace {

Eigen::VectorXcd nodes_map(const BoundaryGrid& g, const std::function<cplx(cplx)>& f) {
  Eigen::VectorXcd v(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) v[k] = f(g.z[k]);
  return v;
}

Domain ellipse() { return build_domain(CurveParam({{1, 0.75}, {-1, 0.25}}), {}); }

}  // namespace

TEST(IntegrateClosed, ResidueOfOneOverZ) {
  const BoundaryGrid g = sample_boundary(disk(), 32);
  const BoundaryFunction f{nodes_map(g, [](cplx z) { return 1.0 / z; }), Measure::dz};
  EXPECT_LT(std::abs(integrate_closed(g, f, Measure::dz) - two_pi * I), 1e-13);
}

TEST(IntegrateClosed, AnnulusOrientation) {
  // The inner circle runs clockwise, so the residue at 0 cancels.
  const BoundaryGrid g = sample_boundary(annulus(), 64);
  const BoundaryFunction f{nodes_map(g, [](cplx z) { return 1.0 / z; }), Measure::dz};
  EXPECT_LT(std::abs(integrate_closed(g, f, Measure::dz)), 1e-13);
}

TEST(IntegrateClosed, ArclengthOfEllipse) {
  const BoundaryGrid g = sample_boundary(ellipse(), 256);
  const BoundaryFunction one{Eigen::VectorXcd::Ones(g.size()), Measure::ds};
  EXPECT_NEAR(integrate_closed(g, one, Measure::ds).real(), g.arclength(0), 1e-14);
}

TEST(IntegrateClosed, MismatchesAreErrors) {
  const BoundaryGrid g = sample_boundary(disk(), 32);
  const BoundaryFunction f{Eigen::VectorXcd::Ones(g.size()), Measure::ds};
  try {
    integrate_closed(g, f, Measure::dz);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::measure_mismatch);
  }
  try {
    integrate_closed(g, {Eigen::VectorXcd::Ones(5), Measure::ds}, Measure::ds);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::shape_mismatch);
  }
}

TEST(IntegrateArc, PolynomialOnSegment) {
  CutArc arc;
  arc.start = cplx(1.0, 0.0);
  arc.end = cplx(0.2, 0.4);
  const ArcNodes nd = arc_nodes(arc);
  std::vector<cplx> f;
  for (cplx z : nd.z) f.push_back(z * z);
  const cplx exact = (std::pow(arc.end, 3) - std::pow(arc.start, 3)) / 3.0;
  EXPECT_LT(std::abs(integrate_arc(nd, f) - exact), 1e-15);
  EXPECT_THROW(integrate_arc(nd, std::vector<cplx>(3)), Error);
}

TEST(IntegrateArc, AdaptiveNearSingularIntegrand) {
  CutArc arc;
  arc.start = cplx(1.0, 0.0);
  arc.end = cplx(0.5, 0.0);
  const cplx p(0.75, 2e-2);
  const cplx v = integrate_arc_adaptive(arc, [p](cplx z) { return 1.0 / (z - p); }, 1e-12);
  const cplx exact = std::log(arc.end - p) - std::log(arc.start - p);
  EXPECT_LT(std::abs(v - exact), 1e-10);
}

TEST(Spectral, DerivativeOfTrigPolynomialIsExact) {
  const BoundaryGrid g = sample_boundary(disk(), 32);
  Eigen::VectorXcd f(g.size()), df(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const double t = g.t[k];
    f[k] = std::cos(3 * t) + cplx(0, 1) * std::sin(7 * t);
    df[k] = -3.0 * std::sin(3 * t) + cplx(0, 7) * std::cos(7 * t);
  }
  EXPECT_LT((spectral::dt(g, f) - df).cwiseAbs().maxCoeff(), 1e-12);
  const spectral::Interpolant ip(g, f, 0);
  EXPECT_LT(std::abs(ip(0.123) - (std::cos(0.369) + cplx(0, 1) * std::sin(0.861))), 1e-13);
  EXPECT_LT(std::abs(ip.eval(0.123, 1) - (-3.0 * std::sin(0.369) + cplx(0, 7) * std::cos(0.861))), 1e-12);
}

TEST(CauchyEval, ExponentialOnEllipse) {
  const BoundaryGrid g = sample_boundary(ellipse(), 128);
  const BoundaryFunction f{nodes_map(g, [](cplx z) { return std::exp(z); }), Measure::dz};
  const cplx z(0.2, 0.1);
  for (int m = 0; m <= 3; ++m) EXPECT_LT(std::abs(cauchy_eval(g, f, z, m) - std::exp(z)), 1e-11) << m;
}

TEST(CauchyEval, ExclusionZone) {
  const BoundaryGrid g = sample_boundary(disk(), 64);
  const BoundaryFunction f{Eigen::VectorXcd::Ones(g.size()), Measure::dz};
  try {
    cauchy_eval(g, f, 0.99);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::too_close_to_boundary);
  }
  EXPECT_LT(std::abs(cauchy_eval(g, f, 0.3) - 1.0), 1e-14);
}

TEST(HolomorphicEval, AccurateUpToTheBoundary) {
  const Domain d = blob3();
  const BoundaryGrid g = sample_boundary(d, 256);
  // Holomorphic in the domain: poles inside both holes.
  auto f = [](cplx z) { return std::exp(z) + 1.0 / (z - cplx(-0.4, 0.1)) + 0.3 / std::pow(z - cplx(0.45, -0.1), 2); };
  const Eigen::VectorXcd fv = nodes_map(g, f);
  for (Eigen::Index k = 0; k < g.size(); k += 37) {
    const cplx nu = g.normal(k);
    for (double dist : {1e-1, 1e-3, 1e-6}) {
      const cplx z = g.z[k] - dist * nu;
      EXPECT_LT(std::abs(holomorphic_eval(g, fv, z) - f(z)), 1e-9 * std::abs(f(z))) << k << " " << dist;
    }
  }
  EXPECT_EQ(holomorphic_eval(g, fv, g.z[5]), fv[5]);
  const cplx z(0.0, 0.5);
  auto df = [](cplx z) { return std::exp(z) - 1.0 / std::pow(z - cplx(-0.4, 0.1), 2) - 0.6 / std::pow(z - cplx(0.45, -0.1), 3); };
  EXPECT_LT(std::abs(holomorphic_eval_d1(g, fv, z) - df(z)), 1e-9);
}

TEST(BoundaryCauchy, PlemeljTrace) {
  auto gp = std::make_shared<const BoundaryGrid>(sample_boundary(blob3(), 256));
  const BoundaryCauchy C(gp);
  auto f = [](cplx z) { return std::exp(z) + 1.0 / (z - cplx(-0.4, 0.1)); };
  const Eigen::VectorXcd fv = nodes_map(*gp, f);
  // Holomorphic inside: the interior limit reproduces the data.
  EXPECT_LT((C.trace(fv) - fv).cwiseAbs().maxCoeff(), 1e-10);
  // A pole inside the domain: holomorphic on the complement and vanishing at
  // infinity, so it drops out of the interior limit.
  const Eigen::VectorXcd hv = nodes_map(*gp, [](cplx z) { return 1.0 / (z - cplx(0.1, 0.5)) + std::exp(z); });
  EXPECT_LT((C.trace(hv) - nodes_map(*gp, [](cplx z) { return std::exp(z); })).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(BoundaryCauchy, ConjugateOnCircleProjectsToZero) {
  auto gp = std::make_shared<const BoundaryGrid>(sample_boundary(disk(), 64));
  const BoundaryCauchy C(gp);
  const Eigen::VectorXcd zbar = gp->z.conjugate();  // = 1/z on the circle
  EXPECT_LT(C.trace(zbar).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(CheckPole, Collision) {
  try {
    check_pole(0.3, 0.3 + 1e-10, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::pole_target_collision);
  }
  EXPECT_NO_THROW(check_pole(0.3, 0.31, 2.0));
}
