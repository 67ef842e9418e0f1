#pragma once

#include <string>
#include <vector>

#include "hejhal_lab/geometry.hpp"

namespace hejhal_lab::testing {

inline CurveParam hole(cplx c, double r) { return CurveParam::circle(c, r, false); }

inline Domain disk() { return build_domain(CurveParam::circle(0.0, 1.0), {}); }
inline Domain annulus(double r = 0.5) { return build_domain(CurveParam::circle(0.0, 1.0), {hole(0.0, r)}); }
inline Domain three_sym() { return build_domain(CurveParam::circle(0.0, 1.0), {hole(-0.5, 0.2), hole(0.5, 0.2)}); }
inline Domain blob3() {
  return build_domain(CurveParam({{-1, 0.08}, {1, 1.0}, {2, cplx(0.1, 0.05)}, {3, 0.04}}),
                      {hole(cplx(-0.4, 0.1), 0.18), hole(cplx(0.45, -0.1), 0.15)});
}
inline Domain four() {
  std::vector<CurveParam> h;
  for (int k = 0; k < 3; ++k) h.push_back(hole(0.5 * std::exp(I * (two_pi * k / 3)), 0.15));
  return build_domain(CurveParam::circle(0.0, 1.0), h);
}

inline std::string config_path(const std::string& name) {
  return std::string(HEJHAL_LAB_SOURCE_DIR) + "/configs/" + name;
}

}  // namespace hejhal_lab::testing
