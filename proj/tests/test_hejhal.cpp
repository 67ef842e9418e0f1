#include <gtest/gtest.h>

#include "hejhal_lab/hejhal.hpp"
#include "oracles.hpp"
#include "test_domains.hpp"

using namespace hejhal_lab;
using namespace hejhal_lab::testing;

namespace {

FitResult fit_on(const KernelContext& ctx, int nz = 8, int nw = 8, double margin = 0.08) {
  const Domain& d = ctx.domain();
  return lambda_from_fit(ctx, interior_samples(d, nullptr, nz, margin, 11),
                         interior_samples(d, nullptr, nw, margin, 50011));
}

}  // namespace

TEST(Fit, DiskHasNoCorrection) {
  // On the disk K = 4 pi S^2, so the residual vanishes with an empty lambda.
  const KernelContext ctx(disk(), {128});
  const FitResult f = fit_on(ctx, 8, 8, 0.15);
  EXPECT_EQ(f.lambda.values.size(), 0);
  EXPECT_LT(f.residual.relative(), 1e-8);
}

TEST(Fit, AnnulusMatchesSeries) {
  const KernelContext ctx(annulus(), {256});
  const FitResult f = fit_on(ctx);
  const double ref = oracle::annulus_lambda(0.5);
  EXPECT_NEAR(f.lambda.values(0, 0), ref, 1e-6 * ref);
  EXPECT_LT(f.residual.relative(), 1e-6);
  EXPECT_EQ(f.residual.pairs, 64u);
}

TEST(Fit, AgreesWithHPeriods) {
  const Domain d = blob3();
  const KernelContext ctx(d, {256});
  const CutSystem cuts = build_cuts(d);
  const FitResult f = fit_on(ctx, 8, 12);
  const LambdaMatrix h = lambda_from_H(ctx, cuts, interior_samples(d, &cuts, 8, 0.08, 123457));
  EXPECT_LT(relative_deviation(f.lambda.values, h.values), 1e-5);
  EXPECT_LT(f.lambda.asymmetry, 1e-6 * f.lambda.values.cwiseAbs().maxCoeff());
}

TEST(Fit, TooFewPairs) {
  const KernelContext ctx(three_sym(), {128});
  const Domain& d = ctx.domain();
  try {
    lambda_from_fit(ctx, interior_samples(d, nullptr, 2, 0.1), interior_samples(d, nullptr, 3, 0.1, 7000));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::rank_deficient_samples);
  }
}

TEST(Verify, FourConnectedIsPositive) {
  const KernelContext ctx(four(), {256});
  const Domain& d = ctx.domain();
  const CutSystem cuts = build_cuts(d);
  const FitResult f = fit_on(ctx, 8, 12);
  const LambdaMatrix h = lambda_from_H(ctx, cuts, interior_samples(d, &cuts, 12, 0.08, 123457));
  const LambdaReport r = hejhal_verify(ctx, {f.lambda, h});
  ASSERT_EQ(r.mu.size(), 3);
  EXPECT_GT(r.mu.minCoeff(), 1e-8 * r.mu.maxCoeff());
  EXPECT_NEAR(r.mu.sum(), f.lambda.values.trace(), 1e-12 * r.mu.sum());
  EXPECT_FALSE(r.method_disagreement);
  EXPECT_TRUE(r.zero_counts.empty());
}

TEST(Verify, ZeroCountsOnThreeConnected) {
  // Each eigen-combination U' has one zero inside or two on the boundary.
  const KernelContext ctx(three_sym(), {256});
  const Domain& d = ctx.domain();
  const CutSystem cuts = build_cuts(d);
  const FitResult f = fit_on(ctx, 8, 12);
  const LambdaMatrix h = lambda_from_H(ctx, cuts, interior_samples(d, &cuts, 8, 0.08, 123457));
  const LambdaReport r = hejhal_verify(ctx, {f.lambda, h});
  ASSERT_EQ(r.zero_counts.size(), 2u);
  for (const ZeroCount& z : r.zero_counts) EXPECT_DOUBLE_EQ(z.weighted(), 1.0);
}

TEST(Verify, Preconditions) {
  const KernelContext ctx(annulus(), {128});
  LambdaMatrix a, b;
  a.method = LambdaMethod::h_periods;
  b.method = LambdaMethod::double_periods;
  a.values = b.values = Eigen::MatrixXd::Identity(1, 1);
  try {
    hejhal_verify(ctx, {a});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::precondition);
  }
  EXPECT_THROW(hejhal_verify(ctx, {a, b}), Error);  // no fit matrix
  LambdaMatrix f = a;
  f.method = LambdaMethod::fit;
  f.values(0, 0) = -1.0;
  try {
    hejhal_verify(ctx, {f, a});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::positivity_violation);
  }
  f.values(0, 0) = 0.0;
  try {
    hejhal_verify(ctx, {f, a});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::nondegeneracy_violation);
  }
}

TEST(Suita, DiskVanishes) {
  const KernelContext ctx(disk(), {128});
  for (cplx a : {cplx(0, 0), cplx(0.3, 0.2), cplx(-0.5, 0.1)}) EXPECT_NEAR(suita_gap(ctx, a), 0.0, 1e-8);
}

TEST(Suita, AnnulusMatchesSeries) {
  const KernelContext ctx(annulus(), {256});
  const cplx a(0.7, 0.0);
  const double ref = oracle::annulus_bergman(a, a, 0.5).real() - 4 * pi * std::norm(oracle::annulus_szego(a, a, 0.5));
  EXPECT_NEAR(ref, 1.747782122585306e-05, 1e-12);
  EXPECT_NEAR(suita_gap(ctx, a), ref, 1e-9);
}

TEST(Suita, PositiveOnBlob) {
  const Domain d = blob3();
  const KernelContext ctx(d, {256});
  for (cplx a : interior_samples(d, nullptr, 20, 0.08, 4242)) EXPECT_GT(suita_gap(ctx, a), 0.0) << a;
}

TEST(UnitMass, EqualsPi) {
  for (const Domain& d : {disk(), annulus()}) {
    const KernelContext ctx(d, {256});
    for (cplx a : {cplx(0.0, 0.7), cplx(-0.6, -0.2)}) {
      const UnitMass m = unit_mass_F(ctx, a);
      EXPECT_LT(std::abs(m.exp_form - pi), 1e-6);
      EXPECT_LT(std::abs(m.plain_form - pi), 1e-6);
    }
  }
}

TEST(Extrapolation, ExactForPolynomials) {
  const std::vector<double> x{0.1, 0.15, 0.2, 0.25};
  std::vector<cplx> y;
  for (double t : x) y.push_back(cplx(2.0 - 3 * t + t * t * t, t * t));
  EXPECT_LT(std::abs(extrapolate_to_zero(x, y) - 2.0), 1e-13);
}

TEST(BoundarySigns, AnnulusZeroIsOpposite) {
  // S(., 1) vanishes at -1/2 on the annulus.
  const KernelContext ctx(annulus(), {256});
  const BoundarySignReport r = boundary_sign_checks(ctx, 0.0);
  EXPECT_LT(std::abs(r.b - cplx(-0.5, 0.0)), 1e-8);
  EXPECT_LT(r.zero_ratio, 1e-5);
  EXPECT_LT(r.TKT.real(), 0.0);
  EXPECT_LT(r.FTFT.real(), 0.0);
  EXPECT_GT(r.hopf, 0.0);
  EXPECT_LE(r.TS2T_max, 1e-10);
  EXPECT_NEAR(r.lambda_from_zero, oracle::annulus_lambda(0.5), 1e-3 * oracle::annulus_lambda(0.5));
  EXPECT_THROW(boundary_sign_checks(KernelContext(disk(), {64}), 0.0), Error);
}

TEST(ResidueProjection, DiskAndAnnulus) {
  const KernelContext dctx(disk(), {128});
  const auto dz = interior_samples(disk(), nullptr, 10, 0.1, 31);
  EXPECT_LT(residue_projection_check(dctx, cplx(0.2, 0.1), cplx(1.0, -0.5), dz), 1e-9);
  EXPECT_LT(residue_projection_check(dctx, cplx(0.2, 0.1), 0.0, dz), 1e-14);
  const KernelContext actx(annulus(), {256});
  const auto az = interior_samples(annulus(), nullptr, 10, 0.08, 31);
  EXPECT_LT(residue_projection_check(actx, cplx(0.0, 0.7), cplx(0.3, 0.4), az), 1e-6);
}

TEST(Ahlfors, AnnulusMap) {
  const KernelContext ctx(annulus(), {256});
  const AhlforsReport r = ahlfors_checks(ctx, cplx(0.7, 0.0), interior_samples(annulus(), nullptr, 10, 0.08, 77));
  EXPECT_LT(r.modulus_error, 1e-8);
  EXPECT_NEAR(r.winding, 2.0, 1e-6);
  EXPECT_LT(r.derivative_error, 1e-7);
  EXPECT_LT(r.schwarz_ratio, 1.0);
}

TEST(BoundaryIdentities, Blob) {
  const KernelContext ctx(blob3(), {256});
  const BoundaryIdentityReport r = boundary_identities(ctx, cplx(0.0, 0.5));
  EXPECT_LT(r.bergman, 1e-7);
  EXPECT_LT(r.szego, 1e-8);
  EXPECT_LT(r.square, 1e-12);
}

TEST(ZeroCounting, DiskPolynomials) {
  const BoundaryGrid g = sample_boundary(disk(), 128);
  Eigen::VectorXcd u1(g.size()), u2(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    u1[k] = g.z[k] - 0.3;
    u2[k] = (g.z[k] - 0.3) * (g.z[k] + cplx(0.2, 0.4));
  }
  EXPECT_EQ(count_zeros(g, u1).interior, 1);
  EXPECT_EQ(count_zeros(g, u2).interior, 2);
}

TEST(Homotopy, ConcentricFamilyStaysPositive) {
  const HolePath path{0.0, 0.0, 0.5, 0.8};
  const auto family = shrinking_hole_family(disk(), path, 5);
  SweepSettings s;
  s.solver.N = 256;
  s.margin = 0.08;
  const HomotopyTrace tr = homotopy_sweep(family, path, s);
  ASSERT_EQ(tr.steps.size(), 5u);
  EXPECT_TRUE(tr.all_positive());
  for (const auto& st : tr.steps) {
    const double rho = st.radius;
    EXPECT_NEAR(st.mu[0], oracle::annulus_lambda(rho), 1e-5 * oracle::annulus_lambda(rho)) << rho;
  }
}

TEST(Homotopy, ThirdHoleDecouples) {
  // As the added hole shrinks, the original block converges to the base lambda.
  const Domain base = annulus();
  const HolePath path{cplx(0.0, 0.75), cplx(0.0, 0.75), 0.1, 0.5};
  const auto family = shrinking_hole_family(base, path, 5);
  SweepSettings s;
  s.solver.N = 256;
  s.margin = 0.08;
  const KernelContext ctx(base, s.solver);
  const Eigen::MatrixXd lam =
      lambda_from_fit(ctx, offset_samples(base, 8, 0.08, 42), offset_samples(base, 8, 0.08, 42 + 7919)).lambda.values;
  const HomotopyTrace tr = homotopy_sweep(family, path, s, lam);
  EXPECT_TRUE(tr.all_positive());
  for (size_t k = 2; k < tr.steps.size(); ++k) EXPECT_LT(tr.steps[k].block_gap, tr.steps[k - 1].block_gap);
  for (const auto& st : tr.steps) EXPECT_LT(st.identity_residual, 1e-6);
}
