#pragma once

#include <stdexcept>
#include <string>

namespace hejhal_lab {

enum class Errc {
  self_intersecting_curve,
  curve_nesting,
  degenerate_curve,
  under_resolved,
  cut_construction_failed,
  margin_too_large,
  hole_collision,
  measure_mismatch,
  shape_mismatch,
  too_close_to_boundary,
  pole_target_collision,
  ill_conditioned,
  non_convergent,
  w_too_close_to_cut,
  rank_deficient_samples,
  nondegeneracy_violation,
  positivity_violation,
  zero_not_found,
  precondition,
  config,
};

inline const char* errc_name(Errc e) {
  switch (e) {
    case Errc::self_intersecting_curve: return "SelfIntersectingCurve";
    case Errc::curve_nesting: return "CurveNesting";
    case Errc::degenerate_curve: return "DegenerateCurve";
    case Errc::under_resolved: return "UnderResolved";
    case Errc::cut_construction_failed: return "CutConstructionFailed";
    case Errc::margin_too_large: return "MarginTooLarge";
    case Errc::hole_collision: return "HoleCollision";
    case Errc::measure_mismatch: return "MeasureMismatch";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::too_close_to_boundary: return "TooCloseToBoundary";
    case Errc::pole_target_collision: return "PoleTargetCollision";
    case Errc::ill_conditioned: return "IllConditioned";
    case Errc::non_convergent: return "NonConvergent";
    case Errc::w_too_close_to_cut: return "WTooCloseToCut";
    case Errc::rank_deficient_samples: return "RankDeficientSamples";
    case Errc::nondegeneracy_violation: return "NondegeneracyViolation";
    case Errc::positivity_violation: return "PositivityViolation";
    case Errc::zero_not_found: return "ZeroNotFound";
    case Errc::precondition: return "Precondition";
    case Errc::config: return "ConfigError";
  }
  return "Unknown";
}

// Input errors are the caller's fault (bad geometry, bad config);
// everything else is a numerical failure.
inline bool is_input_error(Errc e) {
  switch (e) {
    case Errc::self_intersecting_curve:
    case Errc::curve_nesting:
    case Errc::degenerate_curve:
    case Errc::under_resolved:
    case Errc::cut_construction_failed:
    case Errc::margin_too_large:
    case Errc::hole_collision:
    case Errc::precondition:
    case Errc::config:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace hejhal_lab
