#pragma once

#include <cmath>

#include "tad/error.hpp"
#include "tad/scenario.hpp"
#include "tad/vec2.hpp"

namespace tad::geometry {

/// Reference frame attached to the Attacker and Defender: the x axis runs
/// along D -> A, the y axis is the perpendicular bisector of AD. The Attacker
/// sits at (x_A, 0) and the Defender at (-x_A, 0).
struct AdFrame {
  Vec2 origin;
  Vec2 x_axis{1.0, 0.0};
  double half_separation = 0.0; ///< x_A

  Vec2 y_axis() const { return {-x_axis.y, x_axis.x}; }

  Vec2 to_frame(const Vec2 &world) const {
    const Vec2 d = world - origin;
    return {dot(d, x_axis), dot(d, y_axis())};
  }
  Vec2 to_world(const Vec2 &frame) const {
    return origin + frame.x * x_axis + frame.y * y_axis();
  }
  /// World-frame heading of a frame-relative heading.
  double heading_to_world(double frame_heading) const {
    return wrap_angle(frame_heading + bearing(x_axis));
  }

  Vec2 attacker() const { return {half_separation, 0.0}; }
  Vec2 defender() const { return {-half_separation, 0.0}; }
};

inline AdFrame build_frame(const Vec2 &attacker, const Vec2 &defender) {
  const Vec2 span = attacker - defender;
  const double len = norm(span);
  if (!(len > 0.0)) fail(Errc::degenerate_frame, "attacker and defender coincide");
  return {0.5 * (attacker + defender), span / len, 0.5 * len};
}

inline AdFrame build_frame(const Scenario &s) { return build_frame(s.attacker, s.defender); }

enum class CircleKind { DefenderAttacker, AttackerTarget };

/// Apollonius circle in frame coordinates.
struct ApolloniusCircle {
  Vec2 center;
  double radius = 0.0;
  CircleKind kind = CircleKind::DefenderAttacker;

  Vec2 point_at(double angle) const { return center + radius * unit_from_angle(angle); }
};

/// Locus of points the Defender and Attacker reach simultaneously:
/// center (a, 0) with a = (1+g^2)/(1-g^2) x_A and radius 2g/(1-g^2) x_A.
inline ApolloniusCircle da_circle(double x_A, double gamma) {
  if (!(x_A > 0.0)) fail(Errc::degenerate_frame, "half separation must be positive");
  if (!(gamma > 0.0)) fail(Errc::invalid_argument, "gamma must be positive");
  if (!(gamma < 1.0)) fail(Errc::unsupported_regime, "gamma >= 1 (Defender not faster)");
  const double den = 1.0 - gamma * gamma;
  return {{(1.0 + gamma * gamma) / den * x_A, 0.0}, 2.0 * gamma / den * x_A,
          CircleKind::DefenderAttacker};
}

/// Locus of points the Target (speed alpha) and Attacker (speed 1) reach
/// simultaneously.
inline ApolloniusCircle at_circle(const Vec2 &target, double x_A, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(Errc::invalid_argument, "alpha must lie in (0, 1)");
  const double d = std::hypot(x_A - target.x, target.y);
  if (!(d > 0.0)) fail(Errc::zero_diameter, "target coincides with attacker");
  const double den = 1.0 - alpha * alpha;
  const Vec2 center{target.x / den - alpha * alpha * x_A / den, target.y / den};
  return {center, alpha * d / den, CircleKind::AttackerTarget};
}

/// Minimum Target/Attacker speed ratio for which a Target starting inside the
/// DA circle can still be saved. Zero for Targets outside the circle.
inline double critical_alpha(const Vec2 &target, double x_A, double gamma) {
  if (!(x_A > 0.0)) fail(Errc::degenerate_frame, "half separation must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) fail(Errc::unsupported_regime, "gamma must lie in (0, 1)");
  const double to_defender = std::hypot(x_A + target.x, target.y);
  const double to_attacker = std::hypot(x_A - target.x, target.y);
  const double value = (gamma * to_defender - to_attacker) / (2.0 * gamma * x_A);
  return value > 0.0 ? value : 0.0;
}

enum class Region { Inside, Outside, OnBoundary };

inline constexpr double kBoundaryTolerance = 1e-9;

inline Region classify_target(const Vec2 &target, const ApolloniusCircle &circle) {
  const double gap = distance(target, circle.center) - circle.radius;
  if (std::abs(gap) <= kBoundaryTolerance * circle.radius) return Region::OnBoundary;
  return gap < 0.0 ? Region::Inside : Region::Outside;
}

} // namespace tad::geometry
