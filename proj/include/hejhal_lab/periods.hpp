#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hejhal_lab/context.hpp"

namespace hejhal_lab {

enum class FormKind { dF, kappa, sigma, H };

inline const char* form_name(FormKind k) {
  switch (k) {
    case FormKind::dF: return "dF";
    case FormKind::kappa: return "kappa_w";
    case FormKind::sigma: return "sigma_w";
    case FormKind::H: return "H_w";
  }
  return "?";
}

// Entries P_j, j = 1..n-1, stored at index j-1.
struct PeriodVector {
  FormKind kind = FormKind::kappa;
  cplx parameter = 0.0;
  std::vector<cplx> entries;
};

struct PeriodOptions {
  double cut_margin = 0.02;  // minimum dist(w, cut) as a fraction of the diameter
  double tol = 1e-10;        // adaptive panel refinement
  bool slid = false;         // integrate over the slid system
};

inline void check_w_off_cut(const Domain& d, const CutArc& arc, cplx w, double margin) {
  if (detail::point_segment_distance(w, arc.start, arc.end) < margin * d.diameter())
    throw Error(Errc::w_too_close_to_cut, "parameter point lies too close to a cut");
}

inline void require_cuts(const KernelContext& ctx) {
  if (ctx.connectivity() < 2) throw Error(Errc::precondition, "connectivity must be >= 2 for periods");
}

// 2 Re of the front-side integral: the backside adds the conjugate.
inline double beta_period_dF(const KernelContext& ctx, const CutSystem& cuts, size_t j, size_t k,
                             const PeriodOptions& o = {}) {
  require_cuts(ctx);
  const CutArc& arc = cuts.system(o.slid).at(k - 1);
  const HarmonicMeasure& h = ctx.harmonic(j);
  const cplx v = integrate_arc_adaptive(arc, [&](cplx z) { return h.dF(z); }, o.tol, cuts.panels, cuts.order);
  return 2.0 * v.real();
}

// Integral of dG(., w)/dz along sigma_j; purely imaginary since G = 0 at both ends.
inline cplx schiffer_spencer_integral(const KernelContext& ctx, const CutSystem& cuts, size_t j, cplx w,
                                      const PeriodOptions& o = {}) {
  require_cuts(ctx);
  const CutArc& arc = cuts.system(o.slid).at(j - 1);
  check_w_off_cut(ctx.domain(), arc, w, o.cut_margin);
  const GreenEvaluator g = ctx.green(w);
  return integrate_arc_adaptive(arc, [&](cplx z) { return g.dz(z); }, o.tol, cuts.panels, cuts.order);
}

// int K dz + conj(int Lambda dz) along each sigma_j.
inline PeriodVector kappa_periods(const KernelContext& ctx, const CutSystem& cuts, const BergmanField& b,
                                  const PeriodOptions& o = {}) {
  require_cuts(ctx);
  PeriodVector p{FormKind::kappa, b.pole(), {}};
  for (const auto& arc : cuts.system(o.slid)) {
    check_w_off_cut(ctx.domain(), arc, b.pole(), o.cut_margin);
    const cplx k = integrate_arc_adaptive(arc, [&](cplx z) { return b.K(z); }, o.tol, cuts.panels, cuts.order);
    const cplx l =
        integrate_arc_adaptive(arc, [&](cplx z) { return b.Lambda(z); }, o.tol, cuts.panels, cuts.order);
    p.entries.push_back(k + std::conj(l));
  }
  return p;
}

// int S^2 dz + conj(int L^2 dz) along each sigma_j.
inline PeriodVector sigma_periods(const KernelContext& ctx, const CutSystem& cuts, const SzegoField& s,
                                  const PeriodOptions& o = {}) {
  require_cuts(ctx);
  PeriodVector p{FormKind::sigma, s.a, {}};
  for (const auto& arc : cuts.system(o.slid)) {
    check_w_off_cut(ctx.domain(), arc, s.a, o.cut_margin);
    const cplx a = integrate_arc_adaptive(
        arc, [&](cplx z) { const cplx v = s.S(z); return v * v; }, o.tol, cuts.panels, cuts.order);
    const cplx b = integrate_arc_adaptive(
        arc, [&](cplx z) { const cplx v = s.L(z); return v * v; }, o.tol, cuts.panels, cuts.order);
    p.entries.push_back(a + std::conj(b));
  }
  return p;
}

inline PeriodVector kappa_periods(const KernelContext& ctx, const CutSystem& cuts, cplx w,
                                  const PeriodOptions& o = {}) {
  return kappa_periods(ctx, cuts, ctx.bergman(w), o);
}

inline PeriodVector sigma_periods(const KernelContext& ctx, const CutSystem& cuts, cplx w,
                                  const PeriodOptions& o = {}) {
  return sigma_periods(ctx, cuts, ctx.szego(w), o);
}

inline PeriodVector H_periods(const PeriodVector& kappa, const PeriodVector& sigma) {
  PeriodVector p{FormKind::H, kappa.parameter, {}};
  for (size_t j = 0; j < kappa.entries.size(); ++j)
    p.entries.push_back(kappa.entries[j] - 4.0 * pi * sigma.entries[j]);
  return p;
}

inline PeriodVector H_periods(const KernelContext& ctx, const CutSystem& cuts, cplx w,
                              const PeriodOptions& o = {}) {
  return H_periods(kappa_periods(ctx, cuts, w, o), sigma_periods(ctx, cuts, w, o));
}

inline cplx beta_period_kappa(const KernelContext& ctx, const CutSystem& cuts, size_t j, cplx w,
                              const PeriodOptions& o = {}) {
  return kappa_periods(ctx, cuts, w, o).entries.at(j - 1);
}
inline cplx beta_period_sigma(const KernelContext& ctx, const CutSystem& cuts, size_t j, cplx w,
                              const PeriodOptions& o = {}) {
  return sigma_periods(ctx, cuts, w, o).entries.at(j - 1);
}
inline cplx beta_period_H(const KernelContext& ctx, const CutSystem& cuts, size_t k, cplx w,
                          const PeriodOptions& o = {}) {
  return H_periods(ctx, cuts, w, o).entries.at(k - 1);
}

enum class LambdaMethod { fit, h_periods, double_periods };

inline const char* method_name(LambdaMethod m) {
  switch (m) {
    case LambdaMethod::fit: return "fit";
    case LambdaMethod::h_periods: return "periods";
    case LambdaMethod::double_periods: return "double";
  }
  return "?";
}

struct LambdaMatrix {
  LambdaMethod method = LambdaMethod::fit;
  Eigen::MatrixXd values;  // symmetrized
  double asymmetry = 0.0;  // max |lambda_ij - lambda_ji| before symmetrization
  double residual = 0.0;   // method-specific relative residual
  double condition = 0.0;  // condition of the least-squares design
};

inline LambdaMatrix symmetrized(LambdaMethod m, const Eigen::MatrixXd& raw) {
  LambdaMatrix out;
  out.method = m;
  out.asymmetry = (raw - raw.transpose()).cwiseAbs().maxCoeff();
  out.values = 0.5 * (raw + raw.transpose());
  return out;
}

inline double singular_condition(const Eigen::VectorXd& sv) {
  return sv.size() == 0 ? 0.0 : sv[0] / std::max(sv[sv.size() - 1], 1e-300);
}

// H_w periods satisfy P_k(w) = 2 sum_j lambda_kj conj(F_j'(w)); one real
// least-squares problem per row k.
inline LambdaMatrix lambda_from_H(const KernelContext& ctx, const std::vector<cplx>& ws,
                                  const std::vector<PeriodVector>& H) {
  const Eigen::Index m = ctx.connectivity() - 1;
  if (Eigen::Index(ws.size()) < 2 * m)
    throw Error(Errc::rank_deficient_samples, "need at least 2(n-1) parameter samples");
  const Eigen::Index q = Eigen::Index(ws.size());
  Eigen::MatrixXd A(2 * q, m);
  for (Eigen::Index s = 0; s < q; ++s) {
    const Eigen::VectorXcd f = 2.0 * ctx.dF(ws[size_t(s)]).conjugate();
    A.row(2 * s) = f.real().transpose();
    A.row(2 * s + 1) = f.imag().transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv[m - 1] <= 1e-10 * sv[0]) throw Error(Errc::rank_deficient_samples, "F' sample matrix is rank deficient");
  Eigen::MatrixXd raw(m, m);
  double res = 0.0, scale = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    Eigen::VectorXd b(2 * q);
    for (Eigen::Index s = 0; s < q; ++s) {
      b[2 * s] = H[size_t(s)].entries[size_t(k)].real();
      b[2 * s + 1] = H[size_t(s)].entries[size_t(k)].imag();
    }
    const Eigen::VectorXd x = svd.solve(b);
    raw.row(k) = x.transpose();
    res = std::max(res, (A * x - b).cwiseAbs().maxCoeff());
    scale = std::max(scale, b.cwiseAbs().maxCoeff());
  }
  LambdaMatrix out = symmetrized(LambdaMethod::h_periods, raw);
  out.residual = res / std::max(scale, 1e-300);
  out.condition = singular_condition(sv);
  return out;
}

inline LambdaMatrix lambda_from_H(const KernelContext& ctx, const CutSystem& cuts, const std::vector<cplx>& ws,
                                  const PeriodOptions& o = {}) {
  std::vector<PeriodVector> H(ws.size());
  for (size_t s = 0; s < ws.size(); ++s) H[s] = H_periods(ctx, cuts, ws[s], o);
  return lambda_from_H(ctx, ws, H);
}

struct DoublePeriodOptions {
  int degree = 14;       // Legendre fit degree in the cut parameter
  int samples = 32;      // Gauss points inside the sampling window
  double guard = 5.5;    // window keeps dist(w, boundary) >= guard grid spacings
  double tol = 1e-10;    // z-integral refinement
};

// Double beta-integral of sigma: lambda_ij = -pi * 2 Re int_{w in beta_j} p_i(w) dwbar,
// where p_i(w) is the sigma_w period on sigma_i and the w-curve is sigma_j,
// or the slid copy of sigma_i when i = j. Near the cut ends p_i(w) needs
// kernels with a pole next to the boundary, so p_i is sampled on the part of
// the cut at least `guard` spacings away from the boundary and integrated
// through a Legendre least-squares fit over the whole cut.
inline LambdaMatrix lambda_from_double(const KerzmanSteinSolver& ks, const CutSystem& cuts,
                                       const DoublePeriodOptions& o = {}) {
  const BoundaryGrid& g = ks.grid();
  const Domain& d = g.domain;
  const size_t m = d.curve_count() - 1;
  if (m < 1) throw Error(Errc::precondition, "connectivity must be >= 2 for periods");
  double vmax = 0.0;
  for (size_t c = 0; c < g.curve_count(); ++c) vmax = std::max(vmax, g.max_speed(c));
  const double dmin = o.guard * g.spacing() * vmax;
  const GaussRule gr = gauss_legendre(o.samples);

  auto p_on = [&](const CutArc& warc, const std::vector<size_t>& targets) {
    double s0 = -1.0, s1 = -1.0;
    for (int i = 0; i <= 2000; ++i) {
      const double s = i / 2000.0;
      if (d.boundary_distance(warc.point(s)) >= dmin) {
        if (s0 < 0) s0 = s;
        s1 = s;
      }
    }
    if (s0 < 0 || s1 - s0 < 0.2)
      throw Error(Errc::non_convergent, "cut too short for the double-period window");
    Eigen::MatrixXd V(o.samples, o.degree + 1);
    Eigen::MatrixXcd P(o.samples, Eigen::Index(targets.size()));
    for (int q = 0; q < o.samples; ++q) {
      const double s = s0 + (s1 - s0) * 0.5 * (gr.x[q] + 1.0);
      for (int k = 0; k <= o.degree; ++k) V(q, k) = std::legendre(k, 2.0 * s - 1.0);
      const SzegoField f = solve_szego(ks, warc.point(s));
      for (size_t t = 0; t < targets.size(); ++t) {
        const CutArc& zarc = cuts.cuts[targets[t]];
        const cplx a = integrate_arc_adaptive(
            zarc, [&](cplx z) { const cplx v = f.S(z); return v * v; }, o.tol, cuts.panels, cuts.order);
        const cplx b = integrate_arc_adaptive(
            zarc, [&](cplx z) { const cplx v = f.L(z); return v * v; }, o.tol, cuts.panels, cuts.order);
        P(q, Eigen::Index(t)) = a + std::conj(b);
      }
    }
    // The integral over s in [0,1] of the Legendre series is its constant term.
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
    std::vector<double> out;
    for (size_t t = 0; t < targets.size(); ++t) {
      const Eigen::VectorXd cr = qr.solve(Eigen::VectorXd(P.col(Eigen::Index(t)).real()));
      const Eigen::VectorXd ci = qr.solve(Eigen::VectorXd(P.col(Eigen::Index(t)).imag()));
      const cplx integral = cplx(cr[0], ci[0]) * std::conj(warc.direction());
      out.push_back(-pi * 2.0 * integral.real());
    }
    return out;
  };

  Eigen::MatrixXd raw(m, m);
  for (size_t j = 0; j < m; ++j) {
    std::vector<size_t> targets;
    for (size_t i = 0; i < m; ++i)
      if (i != j) targets.push_back(i);
    if (!targets.empty()) {
      const auto v = p_on(cuts.cuts[j], targets);
      for (size_t t = 0; t < targets.size(); ++t) raw(Eigen::Index(targets[t]), Eigen::Index(j)) = v[t];
    }
    raw(Eigen::Index(j), Eigen::Index(j)) = p_on(cuts.slid[j], {j})[0];
  }
  return symmetrized(LambdaMethod::double_periods, raw);
}

struct SpanRank {
  Eigen::VectorXd singular_values;
  int rank = 0;
  int real_rank = 0;  // rank of the real span in R^{2(n-1)}, diagnostic only
  double condition = 0.0;
};

// Rank of the matrix whose rows are the sigma_w period vectors.
inline SpanRank sigma_span_rank(const std::vector<PeriodVector>& rows, double threshold = 1e-8) {
  if (rows.empty()) return {};
  const Eigen::Index q = Eigen::Index(rows.size()), m = Eigen::Index(rows[0].entries.size());
  Eigen::MatrixXcd A(q, m);
  Eigen::MatrixXd R(q, 2 * m);
  for (Eigen::Index s = 0; s < q; ++s)
    for (Eigen::Index j = 0; j < m; ++j) {
      const cplx v = rows[size_t(s)].entries[size_t(j)];
      A(s, j) = v;
      R(s, j) = v.real();
      R(s, m + j) = v.imag();
    }
  SpanRank out;
  out.singular_values = Eigen::JacobiSVD<Eigen::MatrixXcd>(A).singularValues();
  const Eigen::VectorXd rs = Eigen::JacobiSVD<Eigen::MatrixXd>(R).singularValues();
  const double smax = out.singular_values[0];
  for (Eigen::Index i = 0; i < out.singular_values.size(); ++i)
    if (out.singular_values[i] > threshold * smax) ++out.rank;
  for (Eigen::Index i = 0; i < rs.size(); ++i)
    if (rs[i] > threshold * rs[0]) ++out.real_rank;
  out.condition = singular_condition(out.singular_values);
  return out;
}

inline SpanRank sigma_span_rank(const KernelContext& ctx, const CutSystem& cuts, const std::vector<cplx>& ws,
                                const PeriodOptions& o = {}) {
  require_cuts(ctx);
  if (ws.size() < 4 * size_t(ctx.connectivity() - 1))
    throw Error(Errc::rank_deficient_samples, "need at least 4(n-1) parameter samples");
  std::vector<PeriodVector> rows;
  for (cplx w : ws) rows.push_back(sigma_periods(ctx, cuts, w, o));
  return sigma_span_rank(rows);
}

}  // namespace hejhal_lab
