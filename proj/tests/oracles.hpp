#pragma once

#include <complex>
#include <cmath>

// Closed forms and Laurent series for the disk and the annulus rho < |z| < 1,
// independent of the boundary-integral solvers.
namespace hejhal_lab::oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

inline cplx disk_szego(cplx z, cplx w) { return 1.0 / (2 * pi * (1.0 - z * std::conj(w))); }
inline cplx disk_bergman(cplx z, cplx w) { return 1.0 / (pi * std::pow(1.0 - z * std::conj(w), 2)); }
inline double disk_green(cplx z, cplx w) { return -std::log(std::abs((z - w) / (1.0 - std::conj(w) * z))); }

inline cplx annulus_szego(cplx z, cplx w, double rho, int terms = 400) {
  const cplx q = z * std::conj(w);
  cplx s = 0.0;
  for (int k = -terms; k <= terms; ++k) s += std::pow(q, k) / (1.0 + std::pow(rho, 2 * k + 1));
  return s / (2 * pi);
}

inline cplx annulus_bergman(cplx z, cplx w, double rho, int terms = 400) {
  const cplx q = z * std::conj(w);
  cplx s = 0.0;
  for (int k = -terms; k <= terms; ++k) {
    if (k == -1) continue;
    s += double(k + 1) * std::pow(q, k) / (1.0 - std::pow(rho, 2 * k + 2));
  }
  return s / pi + 1.0 / (2 * pi * std::log(1.0 / rho) * q);
}

// F' = 2 d(omega)/dz for omega = ln|z| / ln(rho), the harmonic measure of |z| = rho.
inline cplx annulus_dF(cplx z, double rho) { return 1.0 / (z * std::log(rho)); }

// lambda_11 from K - 4 pi S^2 = lambda F'(z) conj(F'(w)) at one point pair.
inline double annulus_lambda(double rho, cplx z = cplx(0.7, 0.0), cplx w = cplx(0.0, 0.7)) {
  const cplx S = annulus_szego(z, w, rho);
  const cplx r = annulus_bergman(z, w, rho) - 4 * pi * S * S;
  return (r / (annulus_dF(z, rho) * std::conj(annulus_dF(w, rho)))).real();
}

}  // namespace hejhal_lab::oracle
