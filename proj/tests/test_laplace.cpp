#include <gtest/gtest.h>

#include "hejhal_lab/context.hpp"
#include "oracles.hpp"
#include "test_domains.hpp"

using namespace hejhal_lab;
using namespace hejhal_lab::testing;

namespace {

std::shared_ptr<const BoundaryGrid> grid_of(const Domain& d, int N) {
  return std::make_shared<const BoundaryGrid>(sample_boundary(d, N));
}

}  // namespace

TEST(Dirichlet, ReproducesHarmonicData) {
  const Domain d = blob3();
  const DirichletSolver solver(grid_of(d, 512));
  // Harmonic in the domain, with nonzero flux through both holes.
  auto u = [](cplx z) {
    return std::exp(z).real() + 0.3 * std::log(std::abs(z - cplx(-0.4, 0.1))) -
           0.7 * std::log(std::abs(z - cplx(0.45, -0.1)));
  };
  const DirichletSolution s = solver.solve_fn([&](cplx z) { return cplx(u(z)); });
  EXPECT_LT(s.residual, 1e-10);
  for (cplx z : interior_samples(d, nullptr, 20, 0.05)) EXPECT_NEAR(s.value(z).real(), u(z), 1e-10);
  // The flux coefficients are recovered exactly.
  EXPECT_NEAR(s.strengths[0].real(), 0.3, 1e-10);
  EXPECT_NEAR(s.strengths[1].real(), -0.7, 1e-10);
  // 2 du/dz of Re(exp z) is exp z.
  const cplx z(0.1, 0.5);
  const cplx du = std::exp(z) + 0.3 / (z - cplx(-0.4, 0.1)) - 0.7 / (z - cplx(0.45, -0.1));
  EXPECT_LT(std::abs(s.dz2(z) - du), 1e-9);
}

TEST(Dirichlet, ComplexDataByLinearity) {
  const DirichletSolver solver(grid_of(annulus(), 256));
  const DirichletSolution s = solver.solve_fn([](cplx z) { return cplx(z.real(), z.imag() * z.imag() - z.real() * z.real()); });
  const cplx z(0.3, 0.6);
  EXPECT_LT(std::abs(s.value(z) - cplx(z.real(), -(z * z).real())), 1e-10);
}

TEST(Dirichlet, ShapeMismatch) {
  const DirichletSolver solver(grid_of(disk(), 64));
  EXPECT_THROW(solver.solve(Eigen::VectorXcd::Zero(3)), Error);
}

TEST(HarmonicMeasure, AnnulusClosedForm) {
  const KernelContext ctx(annulus(), {256});
  const HarmonicMeasure& h = ctx.harmonic(1);
  EXPECT_NEAR(h.value(0.7), std::log(0.7) / std::log(0.5), 1e-8);
  EXPECT_LT(std::abs(h.dF(0.7) - oracle::annulus_dF(0.7, 0.5)), 1e-8);
  EXPECT_LT(std::abs(h.dF(cplx(-0.2, 0.6)) - oracle::annulus_dF(cplx(-0.2, 0.6), 0.5)), 1e-8);
}

TEST(HarmonicMeasure, MaximumPrincipleAndPartitionOfUnity) {
  const Domain d = four();
  const KernelContext ctx(d, {256});
  for (cplx z : interior_samples(d, nullptr, 30, 0.08)) {
    double sum = 0.0;
    for (size_t j = 1; j < 4; ++j) {
      const double w = ctx.harmonic(j).value(z);
      EXPECT_GT(w, 0.0);
      EXPECT_LT(w, 1.0);
      sum += w;
    }
    EXPECT_LT(sum, 1.0);  // the outer curve carries the rest
  }
}

TEST(Green, DiskClosedForm) {
  const KernelContext ctx(disk(), {128});
  const cplx w(0.3, -0.2);
  const GreenEvaluator g = ctx.green(w);
  for (cplx z : {cplx(0.1, 0.4), cplx(-0.5, 0.0), cplx(0.2, -0.6)}) {
    EXPECT_NEAR(g.G(z), oracle::disk_green(z, w), 1e-12);
    // dG/dz from central differences of the closed form.
    const double h = 1e-5;
    const cplx fd = 0.5 * ((oracle::disk_green(z + h, w) - oracle::disk_green(z - h, w)) / (2 * h) -
                           I * (oracle::disk_green(z + I * h, w) - oracle::disk_green(z - I * h, w)) / (2 * h));
    EXPECT_LT(std::abs(g.dz(z) - fd), 1e-8);
    EXPECT_LT(std::abs(g.dzbar(z) - std::conj(fd)), 1e-8);
  }
  try {
    g.G(w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::pole_target_collision);
  }
}

TEST(Green, SymmetricAndVanishingOnBoundary) {
  const Domain d = blob3();
  const KernelContext ctx(d, {256});
  const auto pts = interior_samples(d, nullptr, 4, 0.08);
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      EXPECT_NEAR(ctx.green(pts[i]).G(pts[j]), ctx.green(pts[j]).G(pts[i]), 1e-11);
  const GreenEvaluator g = ctx.green(pts[0]);
  EXPECT_LT(g.G_trace().cwiseAbs().maxCoeff(), 1e-10);
  // Flux of the unit point source through the boundary.
  const BoundaryGrid& dg = ctx.dirichlet_grid();
  EXPECT_NEAR((g.dn_trace().array() * dg.weight.array()).sum(), -two_pi, 1e-10);
  // G > 0 inside.
  for (cplx z : interior_samples(d, nullptr, 10, 0.08, 99)) EXPECT_GT(g.G(z), 0.0);
}

TEST(Green, TooCloseToBoundary) {
  const KernelContext ctx(annulus(), {128});
  try {
    ctx.green(0.99);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::too_close_to_boundary);
  }
}

TEST(Bergman, DiskClosedForms) {
  const KernelContext ctx(disk(), {128});
  const cplx w(0.2, 0.3);
  const BergmanField b = ctx.bergman(w);
  for (cplx z : {cplx(0.0, 0.0), cplx(-0.4, 0.1), cplx(0.5, -0.5)}) {
    EXPECT_LT(std::abs(b.K(z) - oracle::disk_bergman(z, w)), 1e-11);
    EXPECT_LT(std::abs(b.Lambda(z) - 1.0 / (pi * (z - w) * (z - w))), 1e-11);
  }
  EXPECT_NEAR(ctx.bergman(0.0).K(0.0).real(), 1.0 / pi, 1e-12);
}

TEST(Bergman, AnnulusSeries) {
  const KernelContext ctx(annulus(), {256});
  const cplx w(0.0, 0.7);
  const BergmanField b = ctx.bergman(w);
  for (cplx z : {cplx(0.7, 0.0), cplx(-0.6, -0.3), cplx(0.1, 0.8)})
    EXPECT_LT(std::abs(b.K(z) - oracle::annulus_bergman(z, w, 0.5)), 1e-10 * std::abs(oracle::annulus_bergman(z, w, 0.5)));
}

TEST(Bergman, HermitianSymmetry) {
  const Domain d = blob3();
  const KernelContext ctx(d, {256});
  const auto pts = interior_samples(d, nullptr, 4, 0.08);
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = 0; j < pts.size(); ++j)
      EXPECT_LT(std::abs(ctx.bergman(pts[i]).K(pts[j]) - std::conj(ctx.bergman(pts[j]).K(pts[i]))), 1e-10);
}

TEST(Bergman, AnalyticMatchesFiniteDifferences) {
  const Domain d = blob3();
  const KernelContext ctx(d, {256});
  const cplx z(0.1, 0.5), w(-0.1, -0.5);
  const BergmanPair a = bergman_kernels(ctx.dirichlet(), z, w);
  const BergmanPair f = bergman_kernels_fd(ctx.dirichlet(), z, w);
  EXPECT_LT(std::abs(a.K - f.K), 1e-8 * std::abs(a.K));
  EXPECT_LT(std::abs(a.Lambda - f.Lambda), 1e-8 * std::abs(a.Lambda));
}

TEST(Bergman, BoundaryIdentity) {
  // K dz = -conj(Lambda dz) along the boundary.
  const KernelContext ctx(blob3(), {256});
  const BergmanField b = ctx.bergman(cplx(0.0, 0.5));
  const BoundaryGrid& g = ctx.dirichlet_grid();
  const Eigen::VectorXcd r =
      (b.K_trace().array() * g.tangent.array() + (b.Lambda_trace().array() * g.tangent.array()).conjugate()).matrix();
  EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-9 * b.K_trace().cwiseAbs().maxCoeff());
}

TEST(Bergman, DiagonalOnDisk) {
  // Diagonal values 1/(pi (1-|w|^2)^2).
  const KernelContext ctx(disk(), {128});
  for (double r : {0.0, 0.3, 0.6})
    EXPECT_NEAR(ctx.bergman(r).K(r).real(), 1.0 / (pi * std::pow(1 - r * r, 2)), 1e-10);
}
