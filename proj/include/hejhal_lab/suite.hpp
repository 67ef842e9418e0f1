#pragma once

#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hejhal_lab/config.hpp"
#include "hejhal_lab/hejhal.hpp"

namespace hejhal_lab {

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

enum class ExitCode { ok = 0, check_failed = 1, input_error = 2, numerical_failure = 3 };

inline ExitCode exit_code_for(const Error& e) {
  return is_input_error(e.code()) ? ExitCode::input_error : ExitCode::numerical_failure;
}

inline SolverSettings solver_settings(const RunConfig& rc, int scale = 1) {
  SolverSettings s;
  s.N = rc.N * scale;
  s.dirichlet_oversample = rc.dirichlet_oversample;
  return s;
}

inline CutSystem config_cuts(const RunConfig& rc) {
  return build_cuts(rc.domain, rc.anchors ? *rc.anchors : std::vector<AnchorHint>{});
}

// Deterministic sample sets; the parameter sets are kept off every cut.
struct SampleSets {
  std::vector<cplx> z, w, suita, kappa;
};

// Margin actually used for sampling: the configured one, raised if needed so
// that every point clears the near-boundary exclusion zone of the N grid.
inline double effective_margin(const RunConfig& rc) {
  const BoundaryGrid g = sample_boundary(rc.domain, rc.N);
  double r = 0.0;
  for (size_t c = 0; c < g.curve_count(); ++c) r = std::max(r, exclusion_radius(g, c));
  return std::max(rc.samples.margin, 1.1 * r / rc.domain.diameter());
}

inline SampleSets make_samples(const RunConfig& rc, const CutSystem* cuts) {
  const Domain& d = rc.domain;
  const double m = effective_margin(rc);
  SampleSets s;
  s.z = interior_samples(d, nullptr, rc.samples.z, m, rc.seed);
  s.w = interior_samples(d, cuts, rc.samples.w, m, rc.seed + 100003);
  s.suita = interior_samples(d, nullptr, rc.samples.suita, m, rc.seed + 200003);
  s.kappa = interior_samples(d, cuts, rc.samples.kappa, m, rc.seed + 300007);
  return s;
}

inline const std::vector<LambdaMethod>& all_methods() {
  static const std::vector<LambdaMethod> m{LambdaMethod::fit, LambdaMethod::h_periods, LambdaMethod::double_periods};
  return m;
}

inline LambdaMethod parse_method(const std::string& s) {
  for (LambdaMethod m : all_methods())
    if (s == method_name(m)) return m;
  throw Error(Errc::config, "unknown method '" + s + "' (fit|periods|double|all)");
}

// The double-period method runs its own Kerzman-Stein solve on a grid with
// twice the context's resolution.
inline std::vector<LambdaMatrix> lambda_methods(const KernelContext& ctx, const CutSystem& cuts, const SampleSets& s,
                                                const std::vector<LambdaMethod>& methods,
                                                IdentityResidual* residual = nullptr) {
  if (ctx.connectivity() < 2) throw Error(Errc::precondition, "connectivity must be ≥ 2");
  std::vector<LambdaMatrix> out;
  for (LambdaMethod m : methods) {
    switch (m) {
      case LambdaMethod::fit: {
        const FitResult f = lambda_from_fit(ctx, s.z, s.w);
        if (residual) *residual = f.residual;
        out.push_back(f.lambda);
        break;
      }
      case LambdaMethod::h_periods:
        out.push_back(lambda_from_H(ctx, cuts, s.w));
        break;
      case LambdaMethod::double_periods: {
        auto g = std::make_shared<const BoundaryGrid>(sample_boundary(ctx.domain(), 2 * ctx.grid().N));
        const KerzmanSteinSolver ks(g, ctx.settings().cond_limit);
        out.push_back(lambda_from_double(ks, cuts));
        break;
      }
    }
  }
  return out;
}

struct VerifyReport {
  int connectivity = 0;
  int N = 0;
  bool retried = false;
  std::vector<Check> checks;
  std::vector<LambdaMatrix> lambda;
  Eigen::VectorXd mu;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

class CheckList {
 public:
  explicit CheckList(const RunConfig& rc) : rc_(rc) {}
  // value < tolerance
  void below(const std::string& name, double value, double fallback) {
    const double t = rc_.tol(name, fallback);
    out.push_back({name, value, t, value < t});
  }
  // value > tolerance
  void above(const std::string& name, double value, double fallback) {
    const double t = rc_.tol(name, fallback);
    out.push_back({name, value, t, value > t});
  }
  // Strict sign conditions carry no adjustable tolerance.
  void negative(const std::string& name, double value) { out.push_back({name, value, 0.0, value < 0.0}); }
  void positive(const std::string& name, double value) { out.push_back({name, value, 0.0, value > 0.0}); }
  std::vector<Check> out;

 private:
  const RunConfig& rc_;
};

// Runs the full invariant suite. Solver failures propagate as Error; a
// degenerate or indefinite lambda matrix is retried once at 2N.
inline VerifyReport run_verify(const RunConfig& rc, int scale = 1) {
  const Domain& d = rc.domain;
  const int n = d.connectivity();
  std::optional<CutSystem> cuts;
  if (n >= 2) cuts = config_cuts(rc);
  const SampleSets s = make_samples(rc, cuts ? &*cuts : nullptr);
  const double pi_ = pi;

  VerifyReport rep;
  rep.connectivity = n;
  auto ctx = std::make_unique<KernelContext>(d, solver_settings(rc, scale));
  rep.N = ctx->grid().N;
  CheckList ck(rc);

  // Boundary identities at the first three parameter samples.
  {
    BoundaryIdentityReport worst;
    for (size_t q = 0; q < std::min<size_t>(3, s.w.size()); ++q) {
      const auto b = boundary_identities(*ctx, s.w[q]);
      worst.bergman = std::max(worst.bergman, b.bergman);
      worst.szego = std::max(worst.szego, b.szego);
      worst.square = std::max(worst.square, b.square);
    }
    ck.below("bergman_boundary_identity", worst.bergman, 1e-7);
    ck.below("szego_boundary_identity", worst.szego, 1e-8);
    ck.below("square_boundary_identity", worst.square, 1e-12);
  }

  if (n >= 2) {
    double kmax = 0.0;
    for (cplx w : s.kappa)
      for (cplx p : kappa_periods(*ctx, *cuts, w).entries) kmax = std::max(kmax, std::abs(p));
    ck.below("kappa_periods", kmax, 1e-6);
    double dferr = 0.0;
    for (size_t j = 1; j < size_t(n); ++j)
      for (size_t k = 1; k < size_t(n); ++k)
        dferr = std::max(dferr, std::abs(beta_period_dF(*ctx, *cuts, j, k) - (j == k ? 2.0 : 0.0)));
    ck.below("dF_periods", dferr, 1e-8);
    const SpanRank r = sigma_span_rank(*ctx, *cuts, s.w);
    const Eigen::VectorXd& sv = r.singular_values;
    ck.above("sigma_rank", sv.size() ? sv[sv.size() - 1] / sv[0] : 0.0, 1e-8);

    IdentityResidual ires;
    std::optional<LambdaReport> lr;
    for (int attempt = 0; attempt < 2 && !lr; ++attempt) {
      try {
        rep.lambda = lambda_methods(*ctx, *cuts, s, all_methods(), &ires);
        lr = hejhal_verify(*ctx, rep.lambda, rc.tol("method_agreement", 1e-4));
      } catch (const Error& e) {
        if (attempt == 1 ||
            (e.code() != Errc::positivity_violation && e.code() != Errc::nondegeneracy_violation))
          throw;
        rep.retried = true;
        ctx = std::make_unique<KernelContext>(d, solver_settings(rc, 2 * scale));
        rep.N = ctx->grid().N;
      }
    }
    rep.mu = lr->mu;
    ck.below("identity_residual", ires.relative(), 1e-6);
    double asym = 0.0, lmax = 0.0;
    for (const auto& m : rep.lambda) {
      asym = std::max(asym, m.asymmetry);
      lmax = std::max(lmax, m.values.cwiseAbs().maxCoeff());
    }
    ck.below("lambda_symmetry", asym / lmax, 1e-6);
    ck.below("method_agreement", lr->max_deviation, 1e-4);
    double inv = 0.0;
    for (double c : lr->mu_relative_change) inv = std::max(inv, c);
    ck.below("eigen_invariance", inv, 1e-4);
    ck.above("hejhal_nondegenerate", lr->mu.cwiseAbs().minCoeff() / lr->mu.cwiseAbs().maxCoeff(), 1e-8);
    ck.positive("hejhal_positive", lr->mu.minCoeff());
    for (size_t k = 0; k < lr->zero_counts.size(); ++k)
      ck.below("zero_count_U" + std::to_string(k + 1), std::abs(lr->zero_counts[k].weighted() - 1.0), 0.25);

    double gmin = 1e300;
    for (cplx a : s.suita) gmin = std::min(gmin, suita_gap(*ctx, a));
    ck.positive("suita_positive", gmin);

    if (n == 2) {
      const BoundarySignReport b = boundary_sign_checks(*ctx, rc.boundary_t);
      ck.below("szego_zero_ratio", b.zero_ratio, 1e-5);
      ck.negative("tkt_negative", b.TKT.real());
      ck.below("tkt_real", std::abs(b.TKT.imag()) / std::abs(b.TKT), 1e-4);
      ck.negative("ftft_negative", b.FTFT.real());
      ck.below("ftft_real", std::abs(b.FTFT.imag()) / std::abs(b.FTFT), 1e-4);
      ck.below("ts2t_nonpositive", b.TS2T_max, 1e-10);
      ck.positive("hopf_positive", b.hopf);
      const double lf = rep.lambda[0].values(0, 0);
      ck.below("lambda_from_zero", std::abs(b.lambda_from_zero - lf) / lf, 1e-3);
    }
  } else {
    IdentityResidual ires = lambda_from_fit(*ctx, s.z, s.w).residual;
    ck.below("identity_residual", ires.relative(), 1e-6);
    double gmax = 0.0;
    for (cplx a : s.suita) gmax = std::max(gmax, std::abs(suita_gap(*ctx, a)));
    ck.below("suita_zero", gmax, 1e-8);
  }

  {
    double e_exp = 0.0, e_plain = 0.0, e_agree = 0.0;
    for (size_t q = 0; q < std::min<size_t>(3, s.suita.size()); ++q) {
      const UnitMass u = unit_mass_F(*ctx, s.suita[q]);
      e_exp = std::max(e_exp, std::abs(u.exp_form - pi_));
      e_plain = std::max(e_plain, std::abs(u.plain_form - pi_));
      e_agree = std::max(e_agree, std::abs(u.exp_form - u.plain_form));
    }
    ck.below("unit_mass_exp", e_exp, 1e-6);
    ck.below("unit_mass_plain", e_plain, 1e-6);
    ck.below("unit_mass_agree", e_agree, 1e-8);
  }

  const cplx a = rc.a ? *rc.a : s.suita[0];
  {
    std::vector<cplx> zs;
    for (cplx z : s.z)
      if (std::abs(z - a) > 1e-3 * d.diameter()) zs.push_back(z);
    const AhlforsReport ah = ahlfors_checks(*ctx, a, zs);
    ck.below("ahlfors_modulus", ah.modulus_error, 1e-8);
    ck.below("ahlfors_winding", std::abs(ah.winding - n), 1e-6);
    ck.below("ahlfors_derivative", ah.derivative_error, 1e-7);
    if (n == 1)
      ck.below("ahlfors_schwarz", ah.schwarz_ratio - 1.0, 1e-8);
    else
      ck.negative("ahlfors_schwarz", ah.schwarz_ratio - 1.0);
    ck.below("residue_projection", residue_projection_check(*ctx, a, 1.0, zs), 1e-6);
  }
  rep.checks = std::move(ck.out);
  return rep;
}

inline nlohmann::json to_json(const VerifyReport& r) {
  nlohmann::json j;
  j["connectivity"] = r.connectivity;
  j["N"] = r.N;
  j["retried"] = r.retried;
  j["pass"] = r.pass();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  j["lambda"] = nlohmann::json::object();
  for (const auto& m : r.lambda) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index k = 0; k < m.values.cols(); ++k) row.push_back(m.values(i, k));
      rows.push_back(row);
    }
    j["lambda"][method_name(m.method)] = rows;
  }
  j["mu"] = std::vector<double>(r.mu.data(), r.mu.data() + r.mu.size());
  return j;
}

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// method,i,j,lambda_ij rows (i <= j, 1-based), a blank line, then method,k,mu_k.
inline std::string lambda_csv(const std::vector<LambdaMatrix>& ms) {
  std::string out = "method,i,j,lambda_ij\n";
  for (const auto& m : ms)
    for (Eigen::Index i = 0; i < m.values.rows(); ++i)
      for (Eigen::Index k = i; k < m.values.cols(); ++k)
        out += std::string(method_name(m.method)) + "," + std::to_string(i + 1) + "," + std::to_string(k + 1) + "," +
               fmt17(m.values(i, k)) + "\n";
  out += "\nmethod,k,mu_k\n";
  for (const auto& m : ms) {
    const Eigen::VectorXd mu = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m.values).eigenvalues();
    for (Eigen::Index k = 0; k < mu.size(); ++k)
      out += std::string(method_name(m.method)) + "," + std::to_string(k + 1) + "," + fmt17(mu[k]) + "\n";
  }
  return out;
}

inline HomotopyTrace run_sweep(const RunConfig& rc, int steps) {
  if (steps < 1) throw Error(Errc::precondition, "steps must be >= 1");
  const HolePath path{rc.sweep.start, rc.sweep.end, rc.sweep.r0, rc.sweep.ratio};
  const auto family = shrinking_hole_family(rc.domain, path, steps);
  SweepSettings s;
  s.solver = solver_settings(rc);
  s.samples_z = rc.samples.z;
  s.samples_w = rc.samples.w;
  s.margin = effective_margin(rc);
  s.seed = rc.seed;
  std::optional<Eigen::MatrixXd> base;
  if (rc.domain.connectivity() >= 2) {
    const KernelContext ctx(rc.domain, s.solver);
    const auto zs = offset_samples(rc.domain, s.samples_z, s.margin, s.seed);
    const auto ws = offset_samples(rc.domain, s.samples_w, s.margin, s.seed + 7919);
    base = lambda_from_fit(ctx, zs, ws).lambda.values;
  }
  return homotopy_sweep(family, path, s, base);
}

inline std::string sweep_csv(const HomotopyTrace& tr, int n_family) {
  std::string out = "step,radius,center_re,center_im";
  for (int k = 1; k < n_family; ++k) out += ",mu_" + std::to_string(k);
  out += ",min_mu,status\n";
  for (const auto& st : tr.steps) {
    out += std::to_string(st.step) + "," + fmt17(st.radius) + "," + fmt17(st.center.real()) + "," +
           fmt17(st.center.imag());
    for (int k = 0; k + 1 < n_family; ++k) out += "," + (k < st.mu.size() ? fmt17(st.mu[k]) : std::string("nan"));
    out += "," + (st.mu.size() ? fmt17(st.min_mu) : std::string("nan"));
    out += st.ok ? ",ok\n" : ",failed\n";
  }
  return out;
}

enum class TableKernel { S, L, K, Lambda, F };

inline TableKernel parse_kernel(const std::string& s) {
  if (s == "S") return TableKernel::S;
  if (s == "L") return TableKernel::L;
  if (s == "K") return TableKernel::K;
  if (s == "Lambda") return TableKernel::Lambda;
  if (s == "F") return TableKernel::F;
  throw Error(Errc::config, "unknown kernel '" + s + "' (S|L|K|Lambda|F)");
}

struct TableRow {
  cplx z, w, value;
};

// Kernel values on the admissible points of a G x G grid over the bounding
// box; points in the near-boundary exclusion zone or on the pole are dropped.
inline std::vector<TableRow> tabulate(const RunConfig& rc, TableKernel kind, int G) {
  if (G < 1) throw Error(Errc::precondition, "grid size must be >= 1");
  const KernelContext ctx(rc.domain, solver_settings(rc));
  const Domain& d = rc.domain;
  const cplx w = rc.tabulate_w;
  std::function<cplx(cplx)> f;
  cplx wcol = w;
  std::optional<SzegoField> sz;
  std::optional<BergmanField> bf;
  if (kind == TableKernel::F) {
    if (rc.tabulate_j < 1 || rc.tabulate_j >= d.connectivity())
      throw Error(Errc::precondition, "tabulate.j must be in 1..n-1");
    wcol = cplx(rc.tabulate_j, 0.0);
    const HarmonicMeasure& h = ctx.harmonic(size_t(rc.tabulate_j));
    f = [&h](cplx z) { return h.dF(z); };
  } else if (kind == TableKernel::S || kind == TableKernel::L) {
    sz = ctx.szego(w);
    if (kind == TableKernel::S)
      f = [&](cplx z) { return sz->S(z); };
    else
      f = [&](cplx z) { return sz->L(z); };
  } else {
    bf = ctx.bergman(w);
    if (kind == TableKernel::K)
      f = [&](cplx z) { return bf->K(z); };
    else
      f = [&](cplx z) { return bf->Lambda(z); };
  }
  const auto [lo, hi] = d.bounding_box();
  std::vector<TableRow> rows;
  for (int iy = 0; iy < G; ++iy)
    for (int ix = 0; ix < G; ++ix) {
      const double fx = G == 1 ? 0.5 : double(ix) / (G - 1), fy = G == 1 ? 0.5 : double(iy) / (G - 1);
      const cplx z(lo.real() + fx * (hi.real() - lo.real()), lo.imag() + fy * (hi.imag() - lo.imag()));
      if (!d.contains(z)) continue;
      if (excluded_by(ctx.grid(), z) >= 0) continue;
      if (kind != TableKernel::F && std::abs(z - w) < 1e-8 * d.diameter()) continue;
      rows.push_back({z, wcol, f(z)});
    }
  return rows;
}

inline std::string table_csv(const std::vector<TableRow>& rows) {
  std::string out = "z_re,z_im,w_re,w_im,value_re,value_im\n";
  for (const auto& r : rows)
    out += fmt17(r.z.real()) + "," + fmt17(r.z.imag()) + "," + fmt17(r.w.real()) + "," + fmt17(r.w.imag()) + "," +
           fmt17(r.value.real()) + "," + fmt17(r.value.imag()) + "\n";
  return out;
}

}  // namespace hejhal_lab
