#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "hejhal_lab/geometry.hpp"

namespace hejhal_lab {

enum class Measure { ds, dz };

// Values per grid node; `measure` says which differential the values are
// meant to be integrated against.
struct BoundaryFunction {
  Eigen::VectorXcd values;
  Measure measure = Measure::ds;
};

inline double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

// Per-curve spectral operations on node data.
namespace spectral {

inline Eigen::VectorXcd fft(const Eigen::VectorXcd& x) {
  Eigen::FFT<double> f;
  std::vector<cplx> in(x.data(), x.data() + x.size()), out;
  f.fwd(out, in);
  return Eigen::Map<Eigen::VectorXcd>(out.data(), Eigen::Index(out.size()));
}

inline Eigen::VectorXcd ifft(const Eigen::VectorXcd& X) {
  Eigen::FFT<double> f;
  std::vector<cplx> in(X.data(), X.data() + X.size()), out;
  f.inv(out, in);
  return Eigen::Map<Eigen::VectorXcd>(out.data(), Eigen::Index(out.size()));
}

inline int wavenumber(Eigen::Index m, Eigen::Index N) { return int(m <= N / 2 ? m : m - N); }

// d/dt on every curve; the Nyquist mode is dropped.
inline Eigen::VectorXcd dt(const BoundaryGrid& g, const Eigen::VectorXcd& f) {
  Eigen::VectorXcd out(f.size());
  const Eigen::Index N = g.N;
  for (size_t c = 0; c < g.curve_count(); ++c) {
    Eigen::VectorXcd X = fft(f.segment(g.offset(c), N));
    for (Eigen::Index m = 0; m < N; ++m) X[m] *= (m == N / 2) ? cplx(0.0) : I * double(wavenumber(m, N));
    out.segment(g.offset(c), N) = ifft(X);
  }
  return out;
}

// Trigonometric interpolant of one curve's node values.
class Interpolant {
 public:
  Interpolant() = default;
  Interpolant(const BoundaryGrid& g, const Eigen::VectorXcd& f, size_t c) : phase_(g.phases[c]) {
    coeff_ = fft(f.segment(g.offset(c), g.N)) / double(g.N);
  }
  cplx operator()(double t) const { return eval(t, 0); }
  cplx eval(double t, int order) const {
    const Eigen::Index N = coeff_.size();
    cplx s = 0.0;
    for (Eigen::Index m = 0; m < N; ++m) {
      const int k = wavenumber(m, N);
      if (m == N / 2) {
        if (order == 0) s += coeff_[m] * std::cos(k * (t - phase_));
        continue;
      }
      cplx f = coeff_[m] * std::exp(I * (k * (t - phase_)));
      for (int d = 0; d < order; ++d) f *= I * double(k);
      s += f;
    }
    return s;
  }

 private:
  Eigen::VectorXcd coeff_;
  double phase_ = 0.0;
};

}  // namespace spectral

inline cplx integrate_closed(const BoundaryGrid& g, const BoundaryFunction& f, Measure measure) {
  if (f.values.size() != g.size()) throw Error(Errc::shape_mismatch, "boundary function does not match grid");
  if (f.measure != measure) throw Error(Errc::measure_mismatch, "function tag differs from requested measure");
  if (measure == Measure::ds) return (f.values.array() * g.weight.array()).sum();
  return (f.values.array() * g.dz.array()).sum();
}

inline cplx integrate_arc(const ArcNodes& nodes, const std::vector<cplx>& f) {
  if (f.size() != nodes.z.size()) throw Error(Errc::shape_mismatch, "values do not match arc nodes");
  cplx s = 0.0;
  for (size_t i = 0; i < f.size(); ++i) s += f[i] * nodes.dzw[i];
  return s;
}

// Doubles the panel count until two successive values agree to tol.
inline cplx integrate_arc_adaptive(const CutArc& arc, const std::function<cplx(cplx)>& f, double tol = 1e-10,
                                   int panels = 8, int order = 16, int max_panels = 256) {
  auto once = [&](int p) {
    const ArcNodes nd = arc_nodes(arc, p, order);
    cplx s = 0.0;
    for (size_t i = 0; i < nd.z.size(); ++i) s += f(nd.z[i]) * nd.dzw[i];
    return s;
  };
  cplx prev = once(panels);
  for (int p = 2 * panels; p <= max_panels; p *= 2) {
    const cplx cur = once(p);
    if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw Error(Errc::non_convergent, "arc integral did not settle");
}

inline double exclusion_radius(const BoundaryGrid& g, size_t c) { return 5.0 * g.spacing() * g.max_speed(c); }

// Index of the first curve whose exclusion zone contains z, or -1.
inline int excluded_by(const BoundaryGrid& g, cplx z) {
  for (size_t c = 0; c < g.curve_count(); ++c) {
    const auto seg = g.z.segment(g.offset(c), g.N);
    if ((seg.array() - z).abs().minCoeff() < exclusion_radius(g, c)) return int(c);
  }
  return -1;
}

inline void check_admissible(const BoundaryGrid& g, cplx z) {
  if (const int c = excluded_by(g, z); c >= 0)
    throw Error(Errc::too_close_to_boundary, "target within 5 grid spacings of curve " + std::to_string(c));
}

inline void check_pole(cplx z, cplx w, double diam) {
  if (std::abs(z - w) < 1e-8 * diam) throw Error(Errc::pole_target_collision, "target coincides with the pole");
}

// m-th derivative of the holomorphic extension by the plain trapezoid rule.
inline cplx cauchy_eval(const BoundaryGrid& g, const BoundaryFunction& f, cplx z, int m = 0) {
  if (f.values.size() != g.size()) throw Error(Errc::shape_mismatch, "boundary function does not match grid");
  check_admissible(g, z);
  cplx s = 0.0;
  for (Eigen::Index k = 0; k < g.size(); ++k) s += f.values[k] * g.dz[k] / std::pow(g.z[k] - z, m + 1);
  return factorial(m) * s / (two_pi * I);
}

// Barycentric form of the Cauchy integral: numerator and denominator share
// the same near-singular error, so the ratio stays accurate up to bΩ.
inline cplx holomorphic_eval(const BoundaryGrid& g, const Eigen::VectorXcd& f, cplx z) {
  cplx num = 0.0, den = 0.0;
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const cplx d = g.z[k] - z;
    if (std::abs(d) < 1e-14 * g.domain.diameter()) return f[k];
    const cplx c = g.dz[k] / d;
    num += f[k] * c;
    den += c;
  }
  return num / den;
}

inline cplx holomorphic_eval_d1(const BoundaryGrid& g, const Eigen::VectorXcd& f, cplx z) {
  const cplx fz = holomorphic_eval(g, f, z);
  cplx num = 0.0, den = 0.0;
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const cplx d = g.z[k] - z;
    const cplx c = g.dz[k] / d;
    num += (f[k] - fz) * c / d;
    den += c;
  }
  return num / den;
}

// Boundary trace (limit from inside) of the Cauchy integral of mu.
class BoundaryCauchy {
 public:
  explicit BoundaryCauchy(std::shared_ptr<const BoundaryGrid> grid) : g_(std::move(grid)) {
    const BoundaryGrid& g = *g_;
    const Eigen::Index M = g.size();
    C_.resize(M, M);
    for (Eigen::Index l = 0; l < M; ++l)
      for (Eigen::Index k = 0; k < M; ++k)
        C_(k, l) = (k == l) ? cplx(0.0) : g.dz[l] / (two_pi * I * (g.z[l] - g.z[k]));
    rowsum_ = C_.rowwise().sum();
  }

  // C[k,l] = dz_l / (2 pi i (z_l - z_k)), zero diagonal.
  const Eigen::MatrixXcd& matrix() const { return C_; }

  Eigen::VectorXcd trace(const Eigen::VectorXcd& mu) const {
    const Eigen::VectorXcd dmu = spectral::dt(*g_, mu);
    return mu + C_ * mu - rowsum_.cwiseProduct(mu) + (g_->spacing() / (two_pi * I)) * dmu;
  }

 private:
  std::shared_ptr<const BoundaryGrid> g_;
  Eigen::MatrixXcd C_;
  Eigen::VectorXcd rowsum_;
};

}  // namespace hejhal_lab
