#pragma once

#include <cmath>
#include <string>

#include "tad/error.hpp"
#include "tad/vec2.hpp"

namespace tad {

/// Largest Attacker/Defender speed ratio accepted; the fast-Defender analysis
/// degenerates as gamma approaches one.
inline constexpr double kMaxGamma = 1.0 - 1e-6;

/// Initial engagement in world coordinates. Speeds are normalized by the
/// Attacker speed, so the Attacker moves at 1, the Target at alpha and the
/// Defender at beta = 1 / gamma.
struct Scenario {
  Vec2 target;
  Vec2 attacker;
  Vec2 defender;
  double alpha = 0.5; ///< V_T / V_A
  double gamma = 0.5; ///< V_A / V_D
  double capture_radius_defender = 1e-2;
  double capture_radius_attacker = 0.0;

  double beta() const { return 1.0 / gamma; }

  /// Throws tad::Error naming the offending field.
  void validate() const {
    auto finite = [](const Vec2 &p) { return std::isfinite(p.x) && std::isfinite(p.y); };
    if (!finite(target)) fail(Errc::invalid_argument, "target: coordinates must be finite");
    if (!finite(attacker)) fail(Errc::invalid_argument, "attacker: coordinates must be finite");
    if (!finite(defender)) fail(Errc::invalid_argument, "defender: coordinates must be finite");
    if (!std::isfinite(alpha) || !(alpha > 0.0 && alpha < 1.0))
      fail(Errc::invalid_argument, "alpha: must satisfy 0 < alpha < 1");
    if (!std::isfinite(gamma) || !(gamma > 0.0))
      fail(Errc::invalid_argument, "gamma: must be positive");
    if (!(gamma < kMaxGamma))
      fail(Errc::unsupported_regime,
           "gamma: only the fast-Defender case (gamma < 1 - 1e-6) is supported");
    if (!std::isfinite(capture_radius_defender) || capture_radius_defender < 0.0)
      fail(Errc::invalid_argument, "capture_radius_defender: must be finite and non-negative");
    if (!std::isfinite(capture_radius_attacker) || capture_radius_attacker < 0.0)
      fail(Errc::invalid_argument, "capture_radius_attacker: must be finite and non-negative");
    if (attacker == defender)
      fail(Errc::degenerate_frame, "attacker/defender: positions coincide");
  }
};

} // namespace tad
