#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "hejhal_lab/error.hpp"

namespace hejhal_lab {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr cplx I(0.0, 1.0);

struct FourierTerm {
  int k;
  cplx c;
};

// gamma(t) = sum_k c_k exp(ikt), t in [0, 2pi).
class CurveParam {
 public:
  CurveParam() = default;
  explicit CurveParam(const std::vector<FourierTerm>& terms) {
    std::map<int, cplx> merged;
    for (const auto& t : terms) merged[t.k] += t.c;
    for (const auto& [k, c] : merged)
      if (c != cplx(0.0)) terms_.push_back({k, c});
  }

  static CurveParam circle(cplx center, double radius, bool ccw = true) {
    return CurveParam({{0, center}, {ccw ? 1 : -1, cplx(radius)}});
  }

  cplx derivative(double t, int order) const {
    cplx s = 0.0;
    for (const auto& [k, c] : terms_) {
      cplx f = c * std::exp(I * (k * t));
      for (int d = 0; d < order; ++d) f *= I * double(k);
      s += f;
    }
    return s;
  }
  cplx operator()(double t) const { return derivative(t, 0); }

  int degree() const {
    int m = 0;
    for (const auto& t : terms_) m = std::max(m, std::abs(t.k));
    return m;
  }

  // pi * sum k |c_k|^2; positive for counterclockwise curves.
  double signed_area() const {
    double a = 0.0;
    for (const auto& [k, c] : terms_) a += k * std::norm(c);
    return pi * a;
  }
  bool positively_oriented() const { return signed_area() > 0.0; }

  // Same point set traversed backwards: c_k -> c_{-k}.
  CurveParam reversed() const {
    std::vector<FourierTerm> r;
    for (const auto& [k, c] : terms_) r.push_back({-k, c});
    return CurveParam(r);
  }

  cplx constant_term() const {
    for (const auto& [k, c] : terms_)
      if (k == 0) return c;
    return 0.0;
  }

  const std::vector<FourierTerm>& terms() const { return terms_; }

 private:
  std::vector<FourierTerm> terms_;
};

namespace detail {

inline double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

inline bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2) {
  const double d1 = cross(q2 - q1, p1 - q1), d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1), d4 = cross(p2 - p1, q2 - p1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
         d4 != 0;
}

inline double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double L2 = std::norm(d);
  if (L2 == 0.0) return std::abs(p - a);
  const double s = std::clamp(((p - a) * std::conj(d)).real() / L2, 0.0, 1.0);
  return std::abs(p - (a + s * d));
}

inline double segment_distance(cplx a, cplx b, cplx c, cplx d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

// Winding number of a closed polygon about z, as a real number.
inline double polygon_winding(const std::vector<cplx>& poly, cplx z) {
  double s = 0.0;
  const size_t P = poly.size();
  for (size_t i = 0; i < P; ++i) s += std::arg((poly[(i + 1) % P] - z) / (poly[i] - z));
  return s / two_pi;
}

inline std::vector<cplx> sample_curve(const CurveParam& c, size_t P) {
  std::vector<cplx> pts(P);
  for (size_t i = 0; i < P; ++i) pts[i] = c(two_pi * double(i) / double(P));
  return pts;
}

inline size_t polygon_size(const CurveParam& c) {
  return std::max<size_t>(2048, 16 * (2 * size_t(c.degree()) + 1));
}

}  // namespace detail

// Outer curve (counterclockwise) plus inner curves (clockwise), so that
// the boundary winds once around every interior point.
class Domain {
 public:
  const CurveParam& outer() const { return curves_[0]; }
  const CurveParam& curve(size_t c) const { return curves_[c]; }
  const std::vector<CurveParam>& curves() const { return curves_; }
  size_t curve_count() const { return curves_.size(); }
  int connectivity() const { return int(curves_.size()); }
  double diameter() const { return diameter_; }
  double area() const {
    double a = 0.0;
    for (const auto& c : curves_) a += c.signed_area();
    return a;
  }
  const std::vector<cplx>& polygon(size_t c) const { return polys_[c]; }

  double winding(cplx z) const {
    double w = 0.0;
    for (const auto& p : polys_) w += detail::polygon_winding(p, z);
    return w;
  }
  int winding_number(cplx z) const { return int(std::lround(winding(z))); }
  bool contains(cplx z) const { return winding_number(z) == 1; }

  double boundary_distance(cplx z) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : polys_) {
      const size_t P = p.size();
      for (size_t i = 0; i < P; ++i)
        d = std::min(d, detail::point_segment_distance(z, p[i], p[(i + 1) % P]));
    }
    return d;
  }

  // Bounding box of the outer curve: (lower-left, upper-right).
  std::pair<cplx, cplx> bounding_box() const {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (cplx p : polys_[0]) {
      x0 = std::min(x0, p.real());
      x1 = std::max(x1, p.real());
      y0 = std::min(y0, p.imag());
      y1 = std::max(y1, p.imag());
    }
    return {{x0, y0}, {x1, y1}};
  }

 private:
  friend Domain build_domain(const CurveParam&, const std::vector<CurveParam>&);
  std::vector<CurveParam> curves_;
  std::vector<std::vector<cplx>> polys_;
  double diameter_ = 0.0;
};

namespace detail {

inline void check_curve(const CurveParam& c, const std::vector<cplx>& poly, double diam) {
  const size_t P = std::max<size_t>(256, 8 * (2 * size_t(c.degree()) + 1));
  double smin = 1e300, smax = 0.0;
  for (size_t i = 0; i < P; ++i) {
    const double s = std::abs(c.derivative(two_pi * double(i) / double(P), 1));
    smin = std::min(smin, s);
    smax = std::max(smax, s);
  }
  if (!(smin > 1e-8 * std::max(smax, 1e-300)))
    throw Error(Errc::degenerate_curve, "|gamma'| vanishes (min speed " + std::to_string(smin) + ")");
  const size_t n = poly.size();
  const double tol = 1e-10 * diam;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]) ||
          (j > i + n / 8 && j + n / 8 < i + n && std::abs(poly[i] - poly[j]) < tol))
        throw Error(Errc::self_intersecting_curve, "curve crosses itself");
    }
}

inline bool polygons_cross(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  const size_t na = a.size(), nb = b.size();
  for (size_t i = 0; i < na; ++i) {
    const cplx p1 = a[i], p2 = a[(i + 1) % na];
    const double x0 = std::min(p1.real(), p2.real()), x1 = std::max(p1.real(), p2.real());
    const double y0 = std::min(p1.imag(), p2.imag()), y1 = std::max(p1.imag(), p2.imag());
    for (size_t j = 0; j < nb; ++j) {
      const cplx q1 = b[j], q2 = b[(j + 1) % nb];
      if (std::max(q1.real(), q2.real()) < x0 || std::min(q1.real(), q2.real()) > x1 ||
          std::max(q1.imag(), q2.imag()) < y0 || std::min(q1.imag(), q2.imag()) > y1)
        continue;
      if (segments_intersect(p1, p2, q1, q2)) return true;
    }
  }
  return false;
}

}  // namespace detail

// Validates the curves and fixes orientations (outer ccw, inners cw).
inline Domain build_domain(const CurveParam& outer, const std::vector<CurveParam>& inners) {
  Domain d;
  d.curves_.push_back(outer.positively_oriented() ? outer : outer.reversed());
  for (const auto& c : inners) d.curves_.push_back(c.positively_oriented() ? c.reversed() : c);
  for (const auto& c : d.curves_) {
    if (c.terms().empty()) throw Error(Errc::degenerate_curve, "empty coefficient list");
    d.polys_.push_back(detail::sample_curve(c, detail::polygon_size(c)));
  }
  const auto& op = d.polys_[0];
  const size_t stride = std::max<size_t>(1, op.size() / 512);
  for (size_t i = 0; i < op.size(); i += stride)
    for (size_t j = i + stride; j < op.size(); j += stride)
      d.diameter_ = std::max(d.diameter_, std::abs(op[i] - op[j]));
  for (size_t c = 0; c < d.curves_.size(); ++c) detail::check_curve(d.curves_[c], d.polys_[c], d.diameter_);

  for (size_t j = 1; j < d.curves_.size(); ++j) {
    if (detail::polygons_cross(d.polys_[0], d.polys_[j]))
      throw Error(Errc::curve_nesting, "inner curve " + std::to_string(j) + " meets the outer curve");
    if (std::lround(detail::polygon_winding(d.polys_[0], d.polys_[j][0])) != 1)
      throw Error(Errc::curve_nesting, "inner curve " + std::to_string(j) + " is not inside the outer curve");
    for (size_t k = 1; k < j; ++k) {
      if (detail::polygons_cross(d.polys_[j], d.polys_[k]) ||
          std::lround(detail::polygon_winding(d.polys_[k], d.polys_[j][0])) != 0 ||
          std::lround(detail::polygon_winding(d.polys_[j], d.polys_[k][0])) != 0)
        throw Error(Errc::curve_nesting,
                    "inner curves " + std::to_string(k) + " and " + std::to_string(j) + " overlap");
    }
  }
  return d;
}

// Equispaced nodes t_k = phase_c + 2 pi k / N on every curve, stored
// curve after curve (outer first).
struct BoundaryGrid {
  Domain domain;
  int N = 0;
  std::vector<double> phases;
  Eigen::VectorXd t, speed, weight;
  Eigen::VectorXcd z, d1, d2, tangent, dz;

  size_t curve_count() const { return domain.curve_count(); }
  Eigen::Index size() const { return z.size(); }
  Eigen::Index offset(size_t c) const { return Eigen::Index(c) * N; }
  double spacing() const { return two_pi / N; }
  cplx normal(Eigen::Index k) const { return -I * tangent[k]; }
  size_t curve_of(Eigen::Index k) const { return size_t(k / N); }
  double max_speed(size_t c) const { return speed.segment(offset(c), N).maxCoeff(); }
  double arclength(size_t c) const { return weight.segment(offset(c), N).sum(); }
};

inline BoundaryGrid sample_boundary(const Domain& domain, int N, std::vector<double> phases = {}) {
  int M = 0;
  for (const auto& c : domain.curves()) M = std::max(M, c.degree());
  if (N % 2 != 0 || N < 4 * (2 * M + 1))
    throw Error(Errc::under_resolved,
                "N=" + std::to_string(N) + " must be even and at least " + std::to_string(4 * (2 * M + 1)));
  const size_t nc = domain.curve_count();
  phases.resize(nc, 0.0);
  BoundaryGrid g;
  g.domain = domain;
  g.N = N;
  g.phases = phases;
  const Eigen::Index total = Eigen::Index(nc) * N;
  g.t.resize(total);
  g.speed.resize(total);
  g.weight.resize(total);
  g.z.resize(total);
  g.d1.resize(total);
  g.d2.resize(total);
  g.tangent.resize(total);
  g.dz.resize(total);
  const double h = two_pi / N;
  for (size_t c = 0; c < nc; ++c) {
    const auto& cv = domain.curve(c);
    for (int k = 0; k < N; ++k) {
      const Eigen::Index i = Eigen::Index(c) * N + k;
      const double t = phases[c] + h * k;
      g.t[i] = t;
      g.z[i] = cv.derivative(t, 0);
      g.d1[i] = cv.derivative(t, 1);
      g.d2[i] = cv.derivative(t, 2);
      g.speed[i] = std::abs(g.d1[i]);
      g.tangent[i] = g.d1[i] / g.speed[i];
      g.weight[i] = h * g.speed[i];
      g.dz[i] = h * g.d1[i];
    }
  }
  return g;
}

// Straight segment from an anchor on the outer curve to an anchor on inner
// curve `inner`; the parameter s runs over [0, 1] from outer to inner.
struct CutArc {
  size_t inner = 1;
  double outer_t = 0.0, inner_t = 0.0;
  cplx start, end;

  cplx point(double s) const { return start + s * (end - start); }
  cplx direction() const { return end - start; }
};

struct ArcNodes {
  std::vector<double> s;
  std::vector<cplx> z;
  std::vector<cplx> dzw;  // weight times dz/ds
};

// Gauss-Legendre rule on [-1, 1], Newton iteration on P_n.
struct GaussRule {
  std::vector<double> x, w;
};

inline GaussRule gauss_legendre(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = std::legendre(n, x), pm = std::legendre(n - 1, x);
      dp = n * (x * p - pm) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double p = std::legendre(n, x), pm = std::legendre(n - 1, x);
    dp = n * (x * p - pm) / (x * x - 1.0);
    r.x[n - 1 - i] = x;
    r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

inline ArcNodes arc_nodes(const CutArc& arc, int panels = 8, int order = 16) {
  const GaussRule g = gauss_legendre(order);
  ArcNodes out;
  const cplx d = arc.direction();
  for (int p = 0; p < panels; ++p) {
    const double a = double(p) / panels, b = double(p + 1) / panels;
    for (int q = 0; q < order; ++q) {
      const double s = 0.5 * (a + b) + 0.5 * (b - a) * g.x[q];
      out.s.push_back(s);
      out.z.push_back(arc.point(s));
      out.dzw.push_back(0.5 * (b - a) * g.w[q] * d);
    }
  }
  return out;
}

struct AnchorHint {
  double outer_t = 0.0, inner_t = 0.0;
};

struct CutSystem {
  std::vector<CutArc> cuts;  // sigma_j, j = 1..n-1 stored at index j-1
  std::vector<CutArc> slid;  // rotated copies for the diagonal double-period formula
  double tolerance = 0.0;
  int panels = 8, order = 16;

  const std::vector<CutArc>& system(bool use_slid) const { return use_slid ? slid : cuts; }
};

namespace detail {

inline CutArc make_arc(const Domain& d, size_t j, double to, double ti) {
  CutArc a;
  a.inner = j;
  a.outer_t = to;
  a.inner_t = ti;
  a.start = d.outer()(to);
  a.end = d.curve(j)(ti);
  return a;
}

// The open segment must stay inside the domain and cross no boundary curve.
inline bool arc_admissible(const Domain& d, const CutArc& a) {
  const cplx A = a.point(1e-4), B = a.point(1.0 - 1e-4);
  for (size_t c = 0; c < d.curve_count(); ++c) {
    const auto& p = d.polygon(c);
    for (size_t i = 0; i < p.size(); ++i)
      if (segments_intersect(A, B, p[i], p[(i + 1) % p.size()])) return false;
  }
  for (int m = 1; m < 16; ++m)
    if (!d.contains(a.point(m / 16.0))) return false;
  return true;
}

inline double arc_distance(const CutArc& a, const CutArc& b) {
  return segment_distance(a.start, a.end, b.start, b.end);
}

}  // namespace detail

// Nearest-point anchors between the outer curve and each inner curve unless
// hints are given; sigma-tilde rotates both anchors by `slide` radians.
inline CutSystem build_cuts(const Domain& d, const std::vector<AnchorHint>& hints = {},
                            double slide = 0.3, int panels = 8, int order = 16) {
  const size_t n = d.curve_count();
  if (n < 2) throw Error(Errc::cut_construction_failed, "connectivity must be >= 2 to build cuts");
  if (!hints.empty() && hints.size() != n - 1)
    throw Error(Errc::cut_construction_failed, "need one anchor pair per inner curve");
  CutSystem cs;
  cs.tolerance = 1e-3 * d.diameter();
  cs.panels = panels;
  cs.order = order;
  const size_t P = 512;
  const double tie = 1e-12 * d.diameter();
  auto disjoint = [&](const CutArc& a, const std::vector<CutArc>& others) {
    for (const auto& o : others)
      if (detail::arc_distance(a, o) <= cs.tolerance) return false;
    return true;
  };

  for (size_t j = 1; j < n; ++j) {
    if (!hints.empty()) {
      CutArc a = detail::make_arc(d, j, hints[j - 1].outer_t, hints[j - 1].inner_t);
      if (!detail::arc_admissible(d, a) || !disjoint(a, cs.cuts))
        throw Error(Errc::cut_construction_failed, "anchor hint " + std::to_string(j) + " is not admissible");
      cs.cuts.push_back(a);
      continue;
    }
    struct Cand {
      double dist;
      size_t io, ii;
    };
    std::vector<Cand> cand;
    cand.reserve(P * P);
    const auto po = detail::sample_curve(d.outer(), P), pi_ = detail::sample_curve(d.curve(j), P);
    for (size_t io = 0; io < P; ++io)
      for (size_t ii = 0; ii < P; ++ii) cand.push_back({std::abs(po[io] - pi_[ii]), io, ii});
    std::sort(cand.begin(), cand.end(), [tie](const Cand& a, const Cand& b) {
      if (std::abs(a.dist - b.dist) > tie) return a.dist < b.dist;
      return std::tie(a.io, a.ii) < std::tie(b.io, b.ii);
    });
    bool found = false;
    for (size_t r = 0; r < std::min<size_t>(cand.size(), 256) && !found; ++r) {
      CutArc a = detail::make_arc(d, j, two_pi * cand[r].io / P, two_pi * cand[r].ii / P);
      if (detail::arc_admissible(d, a) && disjoint(a, cs.cuts)) {
        cs.cuts.push_back(a);
        found = true;
      }
    }
    if (!found)
      throw Error(Errc::cut_construction_failed,
                  "no disjoint cut to inner curve " + std::to_string(j) + "; supply anchor hints");
  }

  // Inner curves run clockwise, so decreasing inner_t rotates the same way
  // as increasing outer_t.
  for (size_t j = 1; j < n; ++j) {
    const CutArc& c = cs.cuts[j - 1];
    bool found = false;
    for (double f : {1.0, -1.0, 0.5, -0.5, 1.5, -1.5}) {
      CutArc a = detail::make_arc(d, j, c.outer_t + f * slide, c.inner_t - f * slide);
      if (detail::arc_admissible(d, a) && detail::arc_distance(a, c) > cs.tolerance && disjoint(a, cs.slid)) {
        cs.slid.push_back(a);
        found = true;
        break;
      }
    }
    if (!found)
      throw Error(Errc::cut_construction_failed, "no slid cut for inner curve " + std::to_string(j));
  }
  return cs;
}

inline double halton(uint64_t i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * double(i % base);
    i /= base;
  }
  return r;
}

// Halton points in the bounding box, filtered by the margin (fraction of the
// diameter) from the boundary and from every cut of `cuts` (both systems).
inline std::vector<cplx> interior_samples(const Domain& d, const CutSystem* cuts, int count, double margin,
                                          uint64_t seed = 42) {
  if (!(margin > 0.0)) throw Error(Errc::precondition, "margin must be positive");
  const double dm = margin * d.diameter();
  const auto [lo, hi] = d.bounding_box();
  std::vector<cplx> out;
  const uint64_t budget = 20000 + 2000 * uint64_t(std::max(count, 0));
  for (uint64_t i = 0; i < budget && int(out.size()) < count; ++i) {
    const uint64_t idx = seed + 1 + i;
    const cplx z(lo.real() + (hi.real() - lo.real()) * halton(idx, 2),
                 lo.imag() + (hi.imag() - lo.imag()) * halton(idx, 3));
    if (!d.contains(z) || d.boundary_distance(z) < dm) continue;
    bool ok = true;
    if (cuts)
      for (bool s : {false, true})
        for (const auto& a : cuts->system(s))
          if (detail::point_segment_distance(z, a.start, a.end) < dm) ok = false;
    if (ok) out.push_back(z);
  }
  if (int(out.size()) < count)
    throw Error(Errc::margin_too_large, "found only " + std::to_string(out.size()) + " of " +
                                            std::to_string(count) + " admissible points");
  return out;
}

struct HolePath {
  cplx start, end;
  double r0 = 0.1;
  double ratio = 0.5;
};

// Adds a circular hole of radius r0 * ratio^s whose center moves linearly
// from path.start to path.end over the steps.
inline std::vector<Domain> shrinking_hole_family(const Domain& base, const HolePath& path, int steps) {
  if (steps < 1) throw Error(Errc::precondition, "steps must be >= 1");
  std::vector<Domain> out;
  std::vector<CurveParam> inners(base.curves().begin() + 1, base.curves().end());
  for (int s = 0; s < steps; ++s) {
    const double r = path.r0 * std::pow(path.ratio, s);
    const double f = steps > 1 ? double(s) / (steps - 1) : 0.0;
    const cplx c = path.start + f * (path.end - path.start);
    if (!base.contains(c) || base.boundary_distance(c) <= r * (1.0 + 1e-9))
      throw Error(Errc::hole_collision, "step " + std::to_string(s) + ": hole meets the boundary");
    auto in = inners;
    in.push_back(CurveParam::circle(c, r, false));
    try {
      out.push_back(build_domain(base.outer(), in));
    } catch (const Error& e) {
      throw Error(Errc::hole_collision, "step " + std::to_string(s) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace hejhal_lab
