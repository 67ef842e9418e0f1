#pragma once

#include <memory>

#include "hejhal_lab/quadrature.hpp"

namespace hejhal_lab {

// Nystrom discretization of the Kerzman-Stein operator
//   A(z,w) = H(w,z) - conj(H(z,w)),  H(w,z) = T(z) / (2 pi i (z - w)),
// in the arclength-weighted symmetric form B = W^{1/2} A W^{1/2}. The Szego
// trace solves (I - A W) S(., a) = conj(H(a, .)).
class KerzmanSteinSolver {
 public:
  explicit KerzmanSteinSolver(std::shared_ptr<const BoundaryGrid> grid, double cond_limit = 1e12)
      : g_(std::move(grid)), cauchy_(g_) {
    const BoundaryGrid& g = *g_;
    const Eigen::Index M = g.size();
    sqrtw_ = g.weight.array().sqrt();
    B_.resize(M, M);
    const cplx c = 1.0 / (two_pi * I);
    for (Eigen::Index l = 0; l < M; ++l)
      for (Eigen::Index k = 0; k < M; ++k) {
        if (k == l) {
          B_(k, l) = 0.0;
          continue;
        }
        const cplx hkl = c * g.tangent[l] / (g.z[l] - g.z[k]);
        const cplx hlk = c * g.tangent[k] / (g.z[k] - g.z[l]);
        B_(k, l) = sqrtw_[k] * (hkl - std::conj(hlk)) * sqrtw_[l];
      }
    lu_.compute(Eigen::MatrixXcd::Identity(M, M) - B_);
    condition_ = 1.0 / lu_.rcond();
    if (!(condition_ < cond_limit))
      throw Error(Errc::ill_conditioned, "Kerzman-Stein condition estimate " + std::to_string(condition_));
  }

  const BoundaryGrid& grid() const { return *g_; }
  std::shared_ptr<const BoundaryGrid> grid_ptr() const { return g_; }
  const BoundaryCauchy& cauchy() const { return cauchy_; }
  double condition() const { return condition_; }
  const Eigen::MatrixXcd& weighted_kernel() const { return B_; }

  // max |B + B^*|; zero for an exactly skew-Hermitian discretization.
  double skewness() const { return (B_ + B_.adjoint()).cwiseAbs().maxCoeff(); }

  // Solves (I - A W) x = rhs; returns x and the relative residual.
  std::pair<Eigen::VectorXcd, double> solve_minus(const Eigen::VectorXcd& rhs) const {
    const Eigen::VectorXcd b = sqrtw_.cwiseProduct(rhs);
    const Eigen::VectorXcd y = lu_.solve(b);
    const double res = (y - B_ * y - b).cwiseAbs().maxCoeff() / std::max(1e-300, b.cwiseAbs().maxCoeff());
    if (!(res < 1e-8)) throw Error(Errc::non_convergent, "Kerzman-Stein residual " + std::to_string(res));
    return {y.cwiseQuotient(sqrtw_), res};
  }

  // Solves (I + A W) x = rhs through the adjoint factorization, since
  // I + B = (I - B)^* for skew-Hermitian B.
  Eigen::VectorXcd solve_plus(const Eigen::VectorXcd& rhs) const {
    const Eigen::VectorXcd b = sqrtw_.cwiseProduct(rhs);
    Eigen::VectorXcd y(b.size());
    lu_.template _solve_impl_transposed<true>(b, y);
    return y.cwiseQuotient(sqrtw_);
  }

 private:
  std::shared_ptr<const BoundaryGrid> g_;
  BoundaryCauchy cauchy_;
  Eigen::VectorXd sqrtw_;
  Eigen::MatrixXcd B_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  double condition_ = 0.0;
};

// S(., a) and L(., a) = i conj(S) conj(T) on the boundary; interior values by
// holomorphic evaluation of S and of the regular part L - 1/(2 pi (z - a)).
struct SzegoField {
  std::shared_ptr<const BoundaryGrid> grid;
  cplx a;
  bool boundary_parameter = false;
  Eigen::VectorXcd s_trace, l_trace, lreg_trace;
  double residual = 0.0, condition = 0.0;

  cplx S(cplx z) const { return holomorphic_eval(*grid, s_trace, z); }
  cplx L(cplx z) const {
    if (boundary_parameter) throw Error(Errc::precondition, "L(., a) needs an interior parameter");
    check_pole(z, a, grid->domain.diameter());
    return 1.0 / (two_pi * (z - a)) + holomorphic_eval(*grid, lreg_trace, z);
  }
  cplx L_regular(cplx z) const { return holomorphic_eval(*grid, lreg_trace, z); }
};

inline Eigen::VectorXcd garabedian_trace(const BoundaryGrid& g, const Eigen::VectorXcd& s) {
  return (I * s.conjugate().array() * g.tangent.conjugate().array()).matrix();
}

inline SzegoField solve_szego(const KerzmanSteinSolver& ks, cplx a) {
  const BoundaryGrid& g = ks.grid();
  check_admissible(g, a);
  const Eigen::VectorXcd rhs = (1.0 / (two_pi * I) * g.tangent.array() / (g.z.array() - a)).conjugate().matrix();
  SzegoField f;
  f.grid = ks.grid_ptr();
  f.a = a;
  std::tie(f.s_trace, f.residual) = ks.solve_minus(rhs);
  f.condition = ks.condition();
  f.l_trace = garabedian_trace(g, f.s_trace);
  f.lreg_trace = f.l_trace - (1.0 / (two_pi * (g.z.array() - a))).matrix();
  return f;
}

// S(., a) for a = gamma_c(t_a) on the boundary. The grid must put t_a half way
// between two nodes; the right-hand side then gains the jump term
// (1/2) A(., a) of its boundary limit.
inline SzegoField solve_szego_boundary(const KerzmanSteinSolver& ks, size_t curve, double t_a) {
  const BoundaryGrid& g = ks.grid();
  const double frac = (t_a - g.phases[curve]) / g.spacing();
  if (std::abs(frac - std::floor(frac) - 0.5) > 1e-9)
    throw Error(Errc::precondition, "boundary parameter must sit half way between grid nodes");
  const CurveParam& cv = g.domain.curve(curve);
  const cplx a = cv(t_a);
  const cplx d1 = cv.derivative(t_a, 1);
  const cplx Ta = d1 / std::abs(d1);
  const cplx c = 1.0 / (two_pi * I);
  Eigen::VectorXcd rhs(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const cplx h_ak = c * g.tangent[k] / (g.z[k] - a);
    const cplx h_ka = c * Ta / (a - g.z[k]);
    rhs[k] = std::conj(h_ak) + 0.5 * (h_ka - std::conj(h_ak));
  }
  SzegoField f;
  f.grid = ks.grid_ptr();
  f.a = a;
  f.boundary_parameter = true;
  std::tie(f.s_trace, f.residual) = ks.solve_minus(rhs);
  f.condition = ks.condition();
  f.l_trace = garabedian_trace(g, f.s_trace);
  return f;
}

// Orthogonal projection onto boundary values of holomorphic functions:
// P = C_+ (I + A W)^{-1}.
inline Eigen::VectorXcd szego_projection(const KerzmanSteinSolver& ks, const Eigen::VectorXcd& f) {
  if (f.size() != ks.grid().size()) throw Error(Errc::shape_mismatch, "projection input does not match grid");
  return ks.cauchy().trace(ks.solve_plus(f));
}

// f = S(., a) / L(., a), with f(a) = 0.
class AhlforsMap {
 public:
  explicit AhlforsMap(SzegoField field) : f_(std::move(field)) {
    if (f_.boundary_parameter) throw Error(Errc::precondition, "Ahlfors map needs an interior parameter");
    trace_ = f_.s_trace.cwiseQuotient(f_.l_trace);
  }
  cplx operator()(cplx z) const {
    if (std::abs(z - f_.a) < 1e-14 * f_.grid->domain.diameter()) return 0.0;
    return f_.S(z) / f_.L(z);
  }
  const Eigen::VectorXcd& trace() const { return trace_; }
  cplx derivative_at_parameter() const {
    return cauchy_eval(*f_.grid, {trace_, Measure::dz}, f_.a, 1);
  }
  // Total winding of f along the boundary.
  double winding() const {
    const BoundaryGrid& g = *f_.grid;
    double s = 0.0;
    for (size_t c = 0; c < g.curve_count(); ++c)
      for (int k = 0; k < g.N; ++k) {
        const Eigen::Index i = g.offset(c) + k, j = g.offset(c) + (k + 1) % g.N;
        s += std::arg(trace_[j] / trace_[i]);
      }
    return s / two_pi;
  }
  const SzegoField& field() const { return f_; }

 private:
  SzegoField f_;
  Eigen::VectorXcd trace_;
};

}  // namespace hejhal_lab
