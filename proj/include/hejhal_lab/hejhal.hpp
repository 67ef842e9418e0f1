#pragma once

#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "hejhal_lab/periods.hpp"

namespace hejhal_lab {

struct IdentityResidual {
  double max_abs = 0.0;  // max |K - 4 pi S^2 - sum lambda F' conj(F')|
  double max_K = 0.0;
  size_t pairs = 0;
  double relative() const { return max_abs / std::max(max_K, 1e-300); }
};

struct FitResult {
  LambdaMatrix lambda;
  IdentityResidual residual;
};

namespace detail {

struct PairSample {
  cplx K, S;
  Eigen::VectorXcd Fz, Fw;
};

inline std::vector<PairSample> sample_pairs(const KernelContext& ctx, const std::vector<cplx>& zs,
                                            const std::vector<cplx>& ws) {
  std::vector<Eigen::VectorXcd> Fz(zs.size());
  for (size_t p = 0; p < zs.size(); ++p) Fz[p] = ctx.dF(zs[p]);
  std::vector<PairSample> out(zs.size() * ws.size());
  std::vector<std::exception_ptr> errors(ws.size());
#pragma omp parallel for schedule(static)
  for (long q = 0; q < long(ws.size()); ++q) {
    try {
      const cplx w = ws[size_t(q)];
      const BergmanField b = ctx.bergman(w);
      const SzegoField s = ctx.szego(w);
      const Eigen::VectorXcd Fw = ctx.dF(w);
      for (size_t p = 0; p < zs.size(); ++p) {
        check_pole(zs[p], w, ctx.domain().diameter());
        out[size_t(q) * zs.size() + p] = {b.K(zs[p]), s.S(zs[p]), Fz[p], Fw};
      }
    } catch (...) {
      errors[size_t(q)] = std::current_exception();
    }
  }
  // Rethrow the first failure in sample order so the reported error is deterministic.
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

inline cplx lambda_form(const Eigen::MatrixXd& lam, const Eigen::VectorXcd& Fz, const Eigen::VectorXcd& Fw) {
  return (Fz.transpose() * lam.cast<cplx>() * Fw.conjugate())(0, 0);
}

}  // namespace detail

// Least squares for K - 4 pi S^2 = sum_ij lambda_ij F_i'(z) conj(F_j'(w)) over
// real symmetric lambda.
inline FitResult lambda_from_fit(const KernelContext& ctx, const std::vector<cplx>& zs, const std::vector<cplx>& ws) {
  const Eigen::Index m = ctx.connectivity() - 1;
  const size_t pairs = zs.size() * ws.size();
  if (m > 0 && pairs < size_t(3 * m * m))
    throw Error(Errc::rank_deficient_samples, "need at least 3(n-1)^2 sample pairs");
  const auto samples = detail::sample_pairs(ctx, zs, ws);
  FitResult out;
  out.lambda.method = LambdaMethod::fit;
  out.lambda.values = Eigen::MatrixXd::Zero(m, m);
  if (m > 0) {
    Eigen::MatrixXcd Fs(Eigen::Index(zs.size()), m);
    for (size_t p = 0; p < zs.size(); ++p) Fs.row(Eigen::Index(p)) = samples[p].Fz.transpose();
    const Eigen::VectorXd fsv = Eigen::JacobiSVD<Eigen::MatrixXcd>(Fs).singularValues();
    if (fsv[m - 1] <= 1e-10 * fsv[0]) throw Error(Errc::rank_deficient_samples, "F' sample matrix is rank deficient");

    std::vector<std::pair<Eigen::Index, Eigen::Index>> idx;
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = i; j < m; ++j) idx.push_back({i, j});
    const Eigen::Index u = Eigen::Index(idx.size());
    Eigen::MatrixXd A(2 * Eigen::Index(pairs), u);
    Eigen::VectorXd b(2 * Eigen::Index(pairs));
    for (size_t r = 0; r < pairs; ++r) {
      const auto& s = samples[r];
      const cplx y = s.K - 4.0 * pi * s.S * s.S;
      b[2 * Eigen::Index(r)] = y.real();
      b[2 * Eigen::Index(r) + 1] = y.imag();
      for (Eigen::Index c = 0; c < u; ++c) {
        const auto [i, j] = idx[size_t(c)];
        cplx coef = s.Fz[i] * std::conj(s.Fw[j]);
        if (i != j) coef += s.Fz[j] * std::conj(s.Fw[i]);
        A(2 * Eigen::Index(r), c) = coef.real();
        A(2 * Eigen::Index(r) + 1, c) = coef.imag();
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd x = svd.solve(b);
    for (Eigen::Index c = 0; c < u; ++c) {
      const auto [i, j] = idx[size_t(c)];
      out.lambda.values(i, j) = out.lambda.values(j, i) = x[c];
    }
    out.lambda.condition = singular_condition(svd.singularValues());
  }
  for (const auto& s : samples) {
    const cplx r = s.K - 4.0 * pi * s.S * s.S - (m > 0 ? detail::lambda_form(out.lambda.values, s.Fz, s.Fw) : 0.0);
    out.residual.max_abs = std::max(out.residual.max_abs, std::abs(r));
    out.residual.max_K = std::max(out.residual.max_K, std::abs(s.K));
  }
  out.residual.pairs = pairs;
  out.lambda.residual = out.residual.relative();
  return out;
}

struct ZeroCount {
  int interior = 0;
  int boundary = 0;  // sign changes of Im(U' T) along the boundary
  double winding = 0.0;
  double weighted() const { return interior + 0.5 * boundary; }
};

// Zeros of the holomorphic function with boundary trace `u` (Dirichlet grid):
// boundary zeros from sign changes of Im(u T), which is real-valued there for
// combinations of the F_j'; interior zeros from the winding of u along the
// boundary pushed inward by `offset` grid spacings.
inline ZeroCount count_zeros(const BoundaryGrid& g, const Eigen::VectorXcd& u, int upsample = 8,
                             double offset = 3.0) {
  ZeroCount out;
  const Eigen::VectorXcd r = (u.array() * g.tangent.array()).imag().cast<cplx>();
  const int P = upsample * g.N;
  double wind = 0.0;
  for (size_t c = 0; c < g.curve_count(); ++c) {
    const spectral::Interpolant ri(g, r, c);
    const CurveParam& cv = g.domain.curve(c);
    const double delta = offset * g.spacing();
    std::vector<double> rv(static_cast<size_t>(P), 0.0);
    std::vector<cplx> uv(static_cast<size_t>(P));
    for (int k = 0; k < P; ++k) {
      const double t = g.phases[c] + two_pi * k / P;
      rv[size_t(k)] = ri(t).real();
      const cplx d1 = cv.derivative(t, 1);
      const cplx zin = cv(t) + delta * I * d1;  // inward: the domain lies left of the tangent
      uv[size_t(k)] = holomorphic_eval(g, u, zin);
    }
    for (int k = 0; k < P; ++k) {
      if ((rv[size_t(k)] > 0) != (rv[size_t((k + 1) % P)] > 0)) ++out.boundary;
      wind += std::arg(uv[size_t((k + 1) % P)] / uv[size_t(k)]);
    }
  }
  out.winding = wind / two_pi;
  out.interior = int(std::lround(out.winding));
  return out;
}

struct LambdaReport {
  std::vector<LambdaMatrix> methods;
  Eigen::VectorXd mu;             // ascending eigenvalues of the symmetrized fit matrix
  Eigen::MatrixXd eigenvectors;   // column k: coefficients of U_k' in the F_j' basis
  std::vector<std::pair<std::string, double>> deviations;  // pairwise relative deviations
  double max_deviation = 0.0;
  bool method_disagreement = false;
  std::vector<double> mu_relative_change;  // fit eigenvalues vs those of each other method
  std::vector<ZeroCount> zero_counts;      // n = 3 only
  bool nondegenerate = false, positive = false;
};

inline double relative_deviation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(a.cwiseAbs().maxCoeff(), 1e-300);
}

// Eigen-decomposition of the fit matrix plus cross-method diagnostics.
// Throws NondegeneracyViolation / PositivityViolation.
inline LambdaReport hejhal_verify(const KernelContext& ctx, const std::vector<LambdaMatrix>& methods,
                                  double disagreement_tol = 1e-4) {
  if (methods.size() < 2) throw Error(Errc::precondition, "hejhal_verify needs lambda from at least two methods");
  const LambdaMatrix* fit = nullptr;
  for (const auto& m : methods)
    if (m.method == LambdaMethod::fit) fit = &m;
  if (!fit) throw Error(Errc::precondition, "hejhal_verify needs the fit matrix");
  LambdaReport rep;
  rep.methods = methods;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fit->values);
  rep.mu = es.eigenvalues();
  rep.eigenvectors = es.eigenvectors();
  for (size_t a = 0; a < methods.size(); ++a)
    for (size_t b = a + 1; b < methods.size(); ++b) {
      const double d = relative_deviation(methods[a].values, methods[b].values);
      rep.deviations.push_back({std::string(method_name(methods[a].method)) + "-" + method_name(methods[b].method), d});
      rep.max_deviation = std::max(rep.max_deviation, d);
    }
  rep.method_disagreement = rep.max_deviation > disagreement_tol;
  for (const auto& m : methods) {
    if (&m == fit) continue;
    const Eigen::VectorXd mu2 = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m.values).eigenvalues();
    rep.mu_relative_change.push_back((rep.mu - mu2).cwiseAbs().maxCoeff() / rep.mu.cwiseAbs().maxCoeff());
  }
  const double mmax = rep.mu.cwiseAbs().maxCoeff();
  rep.nondegenerate = rep.mu.cwiseAbs().minCoeff() > 1e-8 * mmax;
  rep.positive = rep.mu.minCoeff() > 0.0;
  if (!rep.nondegenerate)
    throw Error(Errc::nondegeneracy_violation, "lambda matrix is numerically singular");
  if (!rep.positive) throw Error(Errc::positivity_violation, "lambda matrix has a non-positive eigenvalue");
  if (ctx.connectivity() == 3) {
    for (Eigen::Index k = 0; k < rep.mu.size(); ++k) {
      Eigen::VectorXcd u = Eigen::VectorXcd::Zero(ctx.dirichlet_grid().size());
      for (Eigen::Index j = 0; j < rep.mu.size(); ++j)
        u += rep.eigenvectors(j, k) * ctx.harmonic(size_t(j) + 1).dF_trace();
      rep.zero_counts.push_back(count_zeros(ctx.dirichlet_grid(), u));
    }
  }
  return rep;
}

inline double suita_gap(const KernelContext& ctx, cplx a) {
  const cplx K = ctx.bergman(a).K(a);
  const cplx S = ctx.szego(a).S(a);
  return K.real() - 4.0 * pi * (S * S).real();
}

struct UnitMass {
  cplx exp_form;    // i * integral of exp(-2G) dG/dz dz over the boundary
  cplx plain_form;  // i * integral of dG/dz dz
};

inline UnitMass unit_mass_F(const KernelContext& ctx, cplx a) {
  const GreenEvaluator g = ctx.green(a);
  const BoundaryGrid& bg = ctx.dirichlet_grid();
  const Eigen::VectorXcd d = g.dz_trace();
  const Eigen::VectorXd G = g.G_trace();
  UnitMass out{0.0, 0.0};
  for (Eigen::Index k = 0; k < bg.size(); ++k) {
    out.plain_form += I * d[k] * bg.dz[k];
    out.exp_form += I * std::exp(-2.0 * G[k]) * d[k] * bg.dz[k];
  }
  return out;
}

// Polynomial extrapolation to x = 0 (Neville).
inline cplx extrapolate_to_zero(const std::vector<double>& x, std::vector<cplx> y) {
  const size_t n = x.size();
  for (size_t m = 1; m < n; ++m)
    for (size_t i = 0; i + m < n; ++i) y[i] = (x[i + m] * y[i] - x[i] * y[i + 1]) / (x[i + m] - x[i]);
  return y[0];
}

struct BoundarySignReport {
  cplx a, b;
  double t_a = 0.0, t_b = 0.0;
  double zero_ratio = 0.0;     // |S(a,b)| / max over the inner curve of |S(a,.)|
  cplx K_ab;                   // extrapolated boundary value
  double K_extrapolation_spread = 0.0;
  cplx TKT, FTFT;
  double hopf = 0.0;           // d^2 G / dn_a dn_b = -2 pi T(a) K(a,b) conj(T(b))
  double TS2T_max = 0.0;       // max over inner nodes of Re T(a) S(a,w)^2 conj(T(w)), relative
  double TS2T_imag = 0.0;      // max relative imaginary part of the same quantity
  double lambda_from_zero = 0.0;
};

// Normal offsets eps_m = first_offset * diameter * (1 + m * offset_growth).
// They are fixed in physical units so that refining N changes only the
// discretization; the first offset is raised to clear the exclusion zone of
// the Dirichlet grid if necessary.
struct BoundarySignOptions {
  int extrapolation_points = 6;
  double first_offset = 0.0185;
  double offset_growth = 0.5;
};

// Two-connected domains, a = gamma_outer(t_a). S(., a) comes from a
// boundary-parameter Szego solve on a grid shifted so that t_a is a half
// node; K(a, b) from polynomial extrapolation along the inward normal at b.
inline BoundarySignReport boundary_sign_checks(const KernelContext& ctx, double t_a,
                                               const BoundarySignOptions& o = {}) {
  if (ctx.connectivity() != 2) throw Error(Errc::precondition, "boundary sign checks need a 2-connected domain");
  const Domain& d = ctx.domain();
  const BoundaryGrid& g0 = ctx.grid();
  auto sg = std::make_shared<const BoundaryGrid>(sample_boundary(d, g0.N, {t_a - 0.5 * g0.spacing(), 0.0}));
  const KerzmanSteinSolver ks(sg, ctx.settings().cond_limit);
  const SzegoField sa = solve_szego_boundary(ks, 0, t_a);
  const BoundaryGrid& g = *sg;

  BoundarySignReport rep;
  rep.a = sa.a;
  rep.t_a = t_a;
  const Eigen::Index off = g.offset(1);
  Eigen::Index kmin = 0;
  double smax = 0.0, smin = 1e300;
  for (Eigen::Index k = 0; k < g.N; ++k) {
    const double v = std::abs(sa.s_trace[off + k]);
    smax = std::max(smax, v);
    if (v < smin) {
      smin = v;
      kmin = k;
    }
  }
  const spectral::Interpolant si(g, sa.s_trace, 1);
  const double tk = g.t[off + kmin];
  const auto best = boost::math::tools::brent_find_minima(
      [&](double t) { return std::norm(si(t)); }, tk - g.spacing(), tk + g.spacing(), 52);
  rep.t_b = best.first;
  rep.b = d.curve(1)(rep.t_b);
  rep.zero_ratio = std::abs(si(rep.t_b)) / smax;
  if (rep.zero_ratio > 1e-2) throw Error(Errc::zero_not_found, "no zero of S(a, .) on the inner curve");

  const cplx d1a = d.curve(0).derivative(t_a, 1), d1b = d.curve(1).derivative(rep.t_b, 1);
  const cplx Ta = d1a / std::abs(d1a), Tb = d1b / std::abs(d1b);

  const BoundaryGrid& dg = ctx.dirichlet_grid();
  const double eps0 = std::max(o.first_offset * d.diameter(), 1.2 * exclusion_radius(dg, 1));
  std::vector<double> eps;
  std::vector<cplx> vals;
  for (int m = 0; m < o.extrapolation_points; ++m) {
    const double e = eps0 * (1.0 + o.offset_growth * m);
    const BergmanField bf = ctx.bergman(rep.b + e * I * Tb);
    eps.push_back(e);
    vals.push_back(spectral::Interpolant(dg, bf.K_trace(), 0)(t_a));
  }
  rep.K_ab = extrapolate_to_zero(eps, vals);
  const cplx K_less = extrapolate_to_zero(std::vector<double>(eps.begin(), eps.end() - 1),
                                          std::vector<cplx>(vals.begin(), vals.end() - 1));
  rep.K_extrapolation_spread = std::abs(rep.K_ab - K_less) / std::abs(rep.K_ab);

  const HarmonicMeasure& h = ctx.harmonic(1);
  const cplx Fa = spectral::Interpolant(dg, h.dF_trace(), 0)(t_a);
  const cplx Fb = spectral::Interpolant(dg, h.dF_trace(), 1)(rep.t_b);
  rep.TKT = Ta * rep.K_ab * std::conj(Tb);
  rep.FTFT = Fa * Ta * std::conj(Fb * Tb);
  rep.hopf = (-two_pi * rep.TKT).real();
  rep.lambda_from_zero = (rep.TKT / rep.FTFT).real();

  double qmax = -1e300, qabs = 0.0, qim = 0.0;
  for (Eigen::Index k = 0; k < g.N; ++k) {
    const cplx s = std::conj(sa.s_trace[off + k]);
    const cplx q = Ta * s * s * std::conj(g.tangent[off + k]);
    qmax = std::max(qmax, q.real());
    qabs = std::max(qabs, std::abs(q));
    qim = std::max(qim, std::abs(q.imag()));
  }
  rep.TS2T_max = qmax / qabs;
  rep.TS2T_imag = qim / qabs;
  return rep;
}

// Szego projection of r = c/(z - a) against r - 2 pi c L(., a); max abs
// difference over the sample points.
inline double residue_projection_check(const KernelContext& ctx, cplx a, cplx c, const std::vector<cplx>& zs) {
  const BoundaryGrid& g = ctx.grid();
  const SzegoField s = ctx.szego(a);
  const Eigen::VectorXcd r = (c / (g.z.array() - a)).matrix();
  const Eigen::VectorXcd pr = szego_projection(ctx.szego_solver(), r);
  double err = 0.0;
  for (cplx z : zs) {
    const cplx closed = c / (z - a) - two_pi * c * s.L(z);
    err = std::max(err, std::abs(holomorphic_eval(g, pr, z) - closed));
  }
  return err;
}

struct AhlforsReport {
  double modulus_error = 0.0;    // max | |f| - 1 | at boundary half nodes
  double winding = 0.0;
  double derivative_error = 0.0; // |f'(a) - 2 pi S(a,a)| / |2 pi S(a,a)|
  double schwarz_ratio = 0.0;    // max |f(z)| / |F(z)| over samples, |F| = exp(-G(z,a))
};

inline AhlforsReport ahlfors_checks(const KernelContext& ctx, cplx a, const std::vector<cplx>& zs) {
  const AhlforsMap f(ctx.szego(a));
  const BoundaryGrid& g = ctx.grid();
  const SzegoField& s = f.field();
  AhlforsReport rep;
  for (size_t c = 0; c < g.curve_count(); ++c)
    for (int k = 0; k < g.N; ++k) {
      const double t = g.phases[c] + (k + 0.5) * g.spacing();
      const cplx z = g.domain.curve(c)(t);
      const cplx L = 1.0 / (two_pi * (z - a)) + s.L_regular(z);
      rep.modulus_error = std::max(rep.modulus_error, std::abs(std::abs(s.S(z) / L) - 1.0));
    }
  rep.winding = f.winding();
  const cplx ref = two_pi * s.S(a);
  rep.derivative_error = std::abs(f.derivative_at_parameter() - ref) / std::abs(ref);
  const GreenEvaluator G = ctx.green(a);
  for (cplx z : zs) rep.schwarz_ratio = std::max(rep.schwarz_ratio, std::abs(f(z)) / std::exp(-G.G(z)));
  return rep;
}

// Boundary forms of the kernel identities for the parameter w:
//   bergman: K T + conj(Lambda T) = 0, relative to max(|K|, |Lambda|);
//   szego: L = i conj(S T) at half nodes, with S and L from interior evaluation;
//   square: conj(S^2) conj(T) + L^2 T = 0 at the nodes.
struct BoundaryIdentityReport {
  double bergman = 0.0, szego = 0.0, square = 0.0;
};

inline BoundaryIdentityReport boundary_identities(const KernelContext& ctx, cplx w) {
  BoundaryIdentityReport rep;
  const BergmanField b = ctx.bergman(w);
  const BoundaryGrid& dg = ctx.dirichlet_grid();
  const Eigen::VectorXcd rb = (b.K_trace().array() * dg.tangent.array() +
                               (b.Lambda_trace().array() * dg.tangent.array()).conjugate())
                                  .matrix();
  rep.bergman = rb.cwiseAbs().maxCoeff() /
                std::max(b.K_trace().cwiseAbs().maxCoeff(), b.Lambda_trace().cwiseAbs().maxCoeff());

  const SzegoField s = ctx.szego(w);
  const BoundaryGrid& g = ctx.grid();
  double es = 0.0, scale_s = 0.0;
  for (size_t c = 0; c < g.curve_count(); ++c)
    for (int k = 0; k < g.N; ++k) {
      const double t = g.phases[c] + (k + 0.5) * g.spacing();
      const CurveParam& cv = g.domain.curve(c);
      const cplx z = cv(t), d1 = cv.derivative(t, 1), T = d1 / std::abs(d1);
      const cplx L = 1.0 / (two_pi * (z - w)) + s.L_regular(z);
      es = std::max(es, std::abs(L - I * std::conj(s.S(z) * T)));
      scale_s = std::max(scale_s, std::abs(L));
    }
  rep.szego = es / scale_s;
  double esq = 0.0, scale_q = 0.0;
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const cplx S = s.s_trace[k], L = s.l_trace[k], T = g.tangent[k];
    esq = std::max(esq, std::abs(std::conj(S * S) * std::conj(T) + L * L * T));
    scale_q = std::max(scale_q, std::norm(S));
  }
  rep.square = esq / scale_q;
  return rep;
}

struct HomotopyStep {
  int step = 0;
  double radius = 0.0;
  cplx center;
  Eigen::VectorXd mu;
  Eigen::MatrixXd lambda;
  double min_mu = 0.0;
  double identity_residual = 0.0;
  double block_gap = -1.0;  // surviving block vs base lambda, relative
  bool ok = false;
  std::string message;
};

struct HomotopyTrace {
  std::vector<HomotopyStep> steps;
  bool all_positive() const {
    for (const auto& s : steps)
      if (!s.ok || !(s.min_mu > 0.0)) return false;
    return !steps.empty();
  }
};

struct SweepSettings {
  SolverSettings solver;
  int samples_z = 8, samples_w = 8;
  double margin = 0.05;
  uint64_t seed = 42;
};

inline std::vector<cplx> offset_samples(const Domain& d, int count, double margin, uint64_t seed) {
  return interior_samples(d, nullptr, count, margin, seed);
}

// lambda by the fit method along a shrinking-hole family. Failed steps are
// recorded with ok = false, never dropped.
inline HomotopyTrace homotopy_sweep(const std::vector<Domain>& family, const HolePath& path,
                                    const SweepSettings& s, const std::optional<Eigen::MatrixXd>& base = {}) {
  HomotopyTrace tr;
  tr.steps.resize(family.size());
#pragma omp parallel for schedule(dynamic)
  for (long kk = 0; kk < long(family.size()); ++kk) {
    const size_t k = size_t(kk);
    HomotopyStep& st = tr.steps[k];
    st.step = int(k);
    st.radius = path.r0 * std::pow(path.ratio, double(k));
    const double f = family.size() > 1 ? double(k) / double(family.size() - 1) : 0.0;
    st.center = path.start + f * (path.end - path.start);
    try {
      const KernelContext ctx(family[k], s.solver);
      const auto zs = offset_samples(family[k], s.samples_z, s.margin, s.seed);
      const auto ws = offset_samples(family[k], s.samples_w, s.margin, s.seed + 7919);
      const FitResult fit = lambda_from_fit(ctx, zs, ws);
      st.lambda = fit.lambda.values;
      st.identity_residual = fit.residual.relative();
      st.mu = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(st.lambda).eigenvalues();
      st.min_mu = st.mu.minCoeff();
      if (base && base->rows() > 0 && base->rows() < st.lambda.rows()) {
        const Eigen::Index r = base->rows();
        st.block_gap = relative_deviation(*base, st.lambda.topLeftCorner(r, r));
      }
      st.ok = st.min_mu > 0.0;
      if (!st.ok) st.message = "non-positive eigenvalue";
    } catch (const std::exception& e) {
      st.ok = false;
      st.message = e.what();
    }
  }
  return tr;
}

}  // namespace hejhal_lab
