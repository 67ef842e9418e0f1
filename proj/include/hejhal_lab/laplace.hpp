#pragma once

#include <memory>
#include <vector>

#include "hejhal_lab/quadrature.hpp"

namespace hejhal_lab {

// u = Re Phi[mu] + sum_j A_j ln|z - p_j|, Phi the Cauchy integral of mu and
// p_j a point inside inner curve j. Complex data are handled by linearity.
struct DirichletSolution {
  std::shared_ptr<const BoundaryGrid> grid;
  Eigen::VectorXcd mu;
  std::vector<cplx> strengths, sources;
  Eigen::VectorXcd phi_re, phi_im;  // boundary traces of Phi[Re mu], Phi[Im mu]
  Eigen::VectorXcd dtrace;          // boundary trace of 2 du/dz
  double residual = 0.0;

  cplx log_part(cplx z) const {
    cplx s = 0.0;
    for (size_t j = 0; j < sources.size(); ++j) s += strengths[j] * std::log(std::abs(z - sources[j]));
    return s;
  }

  cplx value(cplx z) const {
    return holomorphic_eval(*grid, phi_re, z).real() + I * holomorphic_eval(*grid, phi_im, z).real() +
           log_part(z);
  }

  // 2 du/dz, holomorphic in the domain.
  cplx dz2(cplx z) const { return holomorphic_eval(*grid, dtrace, z); }

  cplx boundary_value(Eigen::Index k) const {
    return phi_re[k].real() + I * phi_im[k].real() + log_part(grid->z[k]);
  }
};

class DirichletSolver {
 public:
  explicit DirichletSolver(std::shared_ptr<const BoundaryGrid> grid, double cond_limit = 1e12)
      : g_(std::move(grid)), cauchy_(g_) {
    const BoundaryGrid& g = *g_;
    const Eigen::Index M = g.size();
    const Eigen::Index nin = Eigen::Index(g.curve_count()) - 1;
    for (size_t c = 1; c < g.curve_count(); ++c) sources_.push_back(g.domain.curve(c).constant_term());
    A_.setZero(M + nin, M + nin);
    const Eigen::MatrixXcd& C = cauchy_.matrix();
    A_.topLeftCorner(M, M) = C.real();
    for (Eigen::Index k = 0; k < M; ++k)
      A_(k, k) = 0.5 + g.spacing() * (g.d2[k] / (2.0 * g.d1[k])).imag() / two_pi;
    for (Eigen::Index j = 0; j < nin; ++j) {
      for (Eigen::Index k = 0; k < M; ++k) A_(k, M + j) = std::log(std::abs(g.z[k] - sources_[j]));
      const Eigen::Index off = g.offset(size_t(j) + 1);
      A_.block(M + j, off, 1, g.N) = g.weight.segment(off, g.N).transpose();
    }
    lu_.compute(A_);
    condition_ = 1.0 / lu_.rcond();
    if (!(condition_ < cond_limit))
      throw Error(Errc::ill_conditioned, "Dirichlet system condition estimate " + std::to_string(condition_));
  }

  const BoundaryGrid& grid() const { return *g_; }
  std::shared_ptr<const BoundaryGrid> grid_ptr() const { return g_; }
  const BoundaryCauchy& cauchy() const { return cauchy_; }
  double condition() const { return condition_; }

  DirichletSolution solve(const Eigen::VectorXcd& data) const {
    const BoundaryGrid& g = *g_;
    const Eigen::Index M = g.size();
    if (data.size() != M) throw Error(Errc::shape_mismatch, "Dirichlet data does not match grid");
    const Eigen::Index nin = Eigen::Index(sources_.size());
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(M + nin, 2);
    rhs.col(0).head(M) = data.real();
    rhs.col(1).head(M) = data.imag();
    const Eigen::MatrixXd x = lu_.solve(rhs);
    const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    DirichletSolution s;
    s.grid = g_;
    s.residual = (A_ * x - rhs).cwiseAbs().maxCoeff() / scale;
    if (!(s.residual < 1e-10)) throw Error(Errc::non_convergent, "Dirichlet residual " + std::to_string(s.residual));
    s.mu = x.col(0).head(M).cast<cplx>() + I * x.col(1).head(M).cast<cplx>();
    s.sources = sources_;
    for (Eigen::Index j = 0; j < nin; ++j) s.strengths.push_back(cplx(x(M + j, 0), x(M + j, 1)));
    s.phi_re = cauchy_.trace(x.col(0).head(M).cast<cplx>());
    s.phi_im = cauchy_.trace(x.col(1).head(M).cast<cplx>());
    // 2 du/dz = Phi'(z) + sum A_j / (z - p_j) with Phi = Phi[Re mu] + i Phi[Im mu].
    s.dtrace = spectral::dt(g, s.phi_re + I * s.phi_im).cwiseQuotient(g.d1);
    for (Eigen::Index j = 0; j < nin; ++j)
      s.dtrace += (s.strengths[size_t(j)] / (g.z.array() - sources_[size_t(j)])).matrix();
    return s;
  }

  template <class F>
  DirichletSolution solve_fn(F&& f) const {
    Eigen::VectorXcd d(g_->size());
    for (Eigen::Index k = 0; k < d.size(); ++k) d[k] = f(g_->z[k]);
    return solve(d);
  }

 private:
  std::shared_ptr<const BoundaryGrid> g_;
  BoundaryCauchy cauchy_;
  Eigen::MatrixXd A_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  std::vector<cplx> sources_;
  double condition_ = 0.0;
};

// omega_j (data 1 on inner curve j) and F_j' = 2 d omega_j / dz.
struct HarmonicMeasure {
  size_t j = 1;
  DirichletSolution sol;

  double value(cplx z) const { return sol.value(z).real(); }
  cplx dF(cplx z) const { return sol.dz2(z); }
  const Eigen::VectorXcd& dF_trace() const { return sol.dtrace; }
};

inline HarmonicMeasure harmonic_measure(const DirichletSolver& solver, size_t j) {
  const BoundaryGrid& g = solver.grid();
  if (j < 1 || j >= g.curve_count()) throw Error(Errc::precondition, "harmonic measure index out of range");
  Eigen::VectorXcd data = Eigen::VectorXcd::Zero(g.size());
  data.segment(g.offset(j), g.N).setOnes();
  return {j, solver.solve(data)};
}

// G(z,w) = -ln|z-w| + u_w(z), u_w harmonic with data ln|zeta-w|.
class GreenEvaluator {
 public:
  GreenEvaluator(const DirichletSolver& solver, cplx w) : w_(w) {
    check_admissible(solver.grid(), w);
    corr_ = solver.solve_fn([w](cplx z) { return cplx(std::log(std::abs(z - w))); });
  }

  cplx pole() const { return w_; }
  const DirichletSolution& corrector() const { return corr_; }
  double diameter() const { return corr_.grid->domain.diameter(); }

  double G(cplx z) const {
    check_pole(z, w_, diameter());
    return -std::log(std::abs(z - w_)) + corr_.value(z).real();
  }
  cplx dz(cplx z) const {
    check_pole(z, w_, diameter());
    return -0.5 / (z - w_) + 0.5 * corr_.dz2(z);
  }
  cplx dzbar(cplx z) const { return std::conj(dz(z)); }

  // Values at the Dirichlet grid nodes.
  Eigen::VectorXd G_trace() const {
    const BoundaryGrid& g = *corr_.grid;
    Eigen::VectorXd out(g.size());
    for (Eigen::Index k = 0; k < g.size(); ++k)
      out[k] = -std::log(std::abs(g.z[k] - w_)) + corr_.boundary_value(k).real();
    return out;
  }
  Eigen::VectorXcd dz_trace() const {
    const BoundaryGrid& g = *corr_.grid;
    return (-0.5 / (g.z.array() - w_)).matrix() + 0.5 * corr_.dtrace;
  }
  // Outward normal derivative: Re(2 dG/dz * nu) = Im(2 dG/dz * T).
  Eigen::VectorXd dn_trace() const {
    const BoundaryGrid& g = *corr_.grid;
    return (2.0 * dz_trace().array() * g.tangent.array()).imag();
  }

 private:
  cplx w_;
  DirichletSolution corr_;
};

// K(., w) and Lambda(., w) from the w-derivatives of the Green corrector,
// taken analytically in the boundary data:
//   d/dwbar ln|zeta-w| = -1/(2 conj(zeta-w)),  d/dw ln|zeta-w| = -1/(2 (zeta-w)).
class BergmanField {
 public:
  BergmanField(const DirichletSolver& solver, cplx w) : w_(w), g_(solver.grid_ptr()) {
    check_admissible(solver.grid(), w);
    k_ = (-1.0 / pi) * solver.solve_fn([w](cplx z) { return -0.5 / std::conj(z - w); }).dtrace;
    lreg_ = (-1.0 / pi) * solver.solve_fn([w](cplx z) { return -0.5 / (z - w); }).dtrace;
  }

  cplx pole() const { return w_; }
  cplx K(cplx z) const { return holomorphic_eval(*g_, k_, z); }
  cplx Lambda(cplx z) const {
    check_pole(z, w_, g_->domain.diameter());
    return 1.0 / (pi * (z - w_) * (z - w_)) + holomorphic_eval(*g_, lreg_, z);
  }
  const Eigen::VectorXcd& K_trace() const { return k_; }
  Eigen::VectorXcd Lambda_trace() const {
    return (1.0 / (pi * (g_->z.array() - w_).square())).matrix() + lreg_;
  }
  const BoundaryGrid& grid() const { return *g_; }

 private:
  cplx w_;
  std::shared_ptr<const BoundaryGrid> g_;
  Eigen::VectorXcd k_, lreg_;
};

struct BergmanPair {
  cplx K, Lambda;
};

inline BergmanPair bergman_kernels(const DirichletSolver& solver, cplx z, cplx w) {
  BergmanField f(solver, w);
  return {f.K(z), f.Lambda(z)};
}

// Reference route: central differences of dG/dz in w (steps h and h/2,
// Richardson 2 -> 4); only the corrector is differenced.
inline BergmanPair bergman_kernels_fd(const DirichletSolver& solver, cplx z, cplx w, double rel_step = 1e-4) {
  check_pole(z, w, solver.grid().domain.diameter());
  const double h0 = rel_step * solver.grid().domain.diameter();
  auto corr = [&](cplx wp) { return 0.5 * GreenEvaluator(solver, wp).corrector().dz2(z); };
  auto partials = [&](double h) {
    const cplx dx = (corr(w + h) - corr(w - h)) / (2.0 * h);
    const cplx dy = (corr(w + I * h) - corr(w - I * h)) / (2.0 * h);
    return std::pair{dx, dy};
  };
  const auto [dx1, dy1] = partials(h0);
  const auto [dx2, dy2] = partials(0.5 * h0);
  const cplx dx = (4.0 * dx2 - dx1) / 3.0, dy = (4.0 * dy2 - dy1) / 3.0;
  const cplx d_wbar = 0.5 * (dx + I * dy), d_w = 0.5 * (dx - I * dy);
  return {(-2.0 / pi) * d_wbar, 1.0 / (pi * (z - w) * (z - w)) - (2.0 / pi) * d_w};
}

}  // namespace hejhal_lab
