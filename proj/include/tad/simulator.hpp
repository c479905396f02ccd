#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tad/error.hpp"
#include "tad/scenario.hpp"
#include "tad/solver.hpp"
#include "tad/tpbvp.hpp"
#include "tad/vec2.hpp"

namespace tad::sim {

/// Re-solve the game from current positions and fly the resulting strategy.
struct OptimalGame {};
/// Heading rate = nav_constant x line-of-sight rate.
struct ProportionalNavigation {
  double nav_constant = 3.0;
};
/// Point straight at the pursued agent.
struct PurePursuit {};
struct FixedHeading {
  double angle = 0.0;
};

using GuidancePolicy = std::variant<OptimalGame, ProportionalNavigation, PurePursuit, FixedHeading>;

/// The Attacker pursues the Target, the Defender pursues the Attacker. The
/// Target has no pursuit law and accepts only OptimalGame or FixedHeading.
struct Policies {
  GuidancePolicy target = OptimalGame{};
  GuidancePolicy attacker = OptimalGame{};
  GuidancePolicy defender = OptimalGame{};
};

struct RunOptions {
  double dt = 1e-3;
  double t_max = 100.0;
  int resolve_stride = 1;
};

struct Sample {
  double t = 0.0;
  Vec2 target, attacker, defender;
  /// World headings flown from this sample on; the final sample repeats the last ones.
  double heading_target = 0.0, heading_attacker = 0.0, heading_defender = 0.0;
  double R = 0.0, r = 0.0;
};

struct Trajectory {
  std::vector<Sample> samples;
  /// Aim point of every re-solve of the game, in world coordinates.
  std::vector<Vec2> aim_points;
  /// Attacker heading at t = 0 (pure-pursuit bearing for PN Attackers).
  double attacker_initial_heading = 0.0;
};

struct DefenderIntercepts {
  double t_f = 0.0;
  double R_final = 0.0;
  Vec2 point;
};
struct AttackerCaptures {
  double t = 0.0;
};
struct Timeout {
  double t_max = 0.0;
};
using Outcome = std::variant<DefenderIntercepts, AttackerCaptures, Timeout>;

struct RunResult {
  Trajectory trajectory;
  Outcome outcome;
};

struct Kinematics {
  Vec2 position;
  Vec2 velocity;
};

/// Commanded heading rate of a PN pursuer.
inline double pn_heading_rate(const Kinematics &pursuer, const Kinematics &pursued,
                              double nav_constant) {
  const Vec2 rel = pursued.position - pursuer.position;
  const double r2 = dot(rel, rel);
  if (!(r2 > 0.0)) fail(Errc::undefined_direction, "zero separation: capture already occurred");
  const double los_rate = cross(rel, pursued.velocity - pursuer.velocity) / r2;
  return nav_constant * los_rate;
}

inline double pure_pursuit_heading(const Vec2 &pursuer, const Vec2 &pursued) {
  if (pursuer == pursued) fail(Errc::undefined_direction, "coincident positions: capture");
  return bearing(pursued - pursuer);
}

inline tpbvp::ReducedState reduce_state(const Sample &s) {
  return tpbvp::reduce(s.target, s.attacker, s.defender);
}

namespace detail {

/// First s in [0, h] at which |p0 + s w| <= radius, if any.
inline std::optional<double> first_crossing(const Vec2 &p0, const Vec2 &w, double radius,
                                            double h) {
  const double c = dot(p0, p0) - radius * radius;
  if (c <= 0.0) return 0.0;
  const double a = dot(w, w);
  const double b = 2.0 * dot(p0, w);
  if (!(a > 0.0) || b >= 0.0) return std::nullopt;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::nullopt;
  const double s = (-b - std::sqrt(disc)) / (2.0 * a);
  if (s > h) return std::nullopt;
  return std::max(s, 0.0);
}

inline void check_policies(const Policies &p) {
  if (std::holds_alternative<ProportionalNavigation>(p.target) ||
      std::holds_alternative<PurePursuit>(p.target))
    fail(Errc::invalid_argument, "target policy: only optimal or fixed heading are meaningful");
  for (const GuidancePolicy *g : {&p.attacker, &p.defender})
    if (const auto *pn = std::get_if<ProportionalNavigation>(g); pn && !(pn->nav_constant > 0.0))
      fail(Errc::invalid_argument, "pn_constant: must be positive");
}

} // namespace detail

/// Integrates the realistic-plane engagement with explicit Euler steps:
/// headings are chosen at the start of each step, then every agent moves
/// straight at its speed for dt. Within a step relative motion is linear, so
/// capture times are located exactly inside the step. The Defender wins a
/// simultaneous crossing.
inline RunResult run(const Scenario &scenario, const Policies &policies, const RunOptions &opt = {}) {
  scenario.validate();
  detail::check_policies(policies);
  if (!(opt.dt > 0.0) || !std::isfinite(opt.dt)) fail(Errc::invalid_argument, "dt: must be positive");
  if (!(opt.t_max > 0.0) || !std::isfinite(opt.t_max))
    fail(Errc::invalid_argument, "t_max: must be positive");
  if (opt.resolve_stride < 1) fail(Errc::invalid_argument, "resolve_stride: must be at least 1");

  const double alpha = scenario.alpha, beta = scenario.beta();
  const double r_c = scenario.capture_radius_defender;
  const double r_a = std::max(scenario.capture_radius_attacker, 1e-9);
  const bool needs_game = std::holds_alternative<OptimalGame>(policies.target) ||
                          std::holds_alternative<OptimalGame>(policies.attacker) ||
                          std::holds_alternative<OptimalGame>(policies.defender);

  Scenario cur = scenario;
  RunResult out;
  Trajectory &traj = out.trajectory;

  auto sample_at = [&](double t, const Vec2 &T, const Vec2 &A, const Vec2 &D, double hT, double hA,
                       double hD) {
    return Sample{t, T, A, D, hT, hA, hD, distance(A, T), distance(A, D)};
  };

  if (distance(cur.attacker, cur.defender) <= r_c) {
    traj.samples.push_back(sample_at(0.0, cur.target, cur.attacker, cur.defender, 0, 0, 0));
    out.outcome = DefenderIntercepts{0.0, distance(cur.attacker, cur.target), cur.attacker};
    return out;
  }

  // Heading state for PN pursuers starts on the pure-pursuit bearing.
  double pn_attacker = pure_pursuit_heading(cur.attacker, cur.target);
  double pn_defender = pure_pursuit_heading(cur.defender, cur.attacker);

  Vec2 aim;
  solver::Regime regime = solver::Regime::Outside;
  const long n_steps = std::max(1L, static_cast<long>(std::ceil(opt.t_max / opt.dt - 1e-9)));
  double t = 0.0;
  for (long step = 0;; ++step) {
    if (needs_game && step % opt.resolve_stride == 0) {
      try {
        const auto sol = solver::solve(cur);
        aim = sol.intercept_world;
        regime = sol.regime;
      } catch (const Error &e) {
        throw Error(e.code(), "step " + std::to_string(step) + ": " + e.what());
      }
      traj.aim_points.push_back(aim);
    }
    auto toward = [&](const Vec2 &from, const Vec2 &to) {
      return distance(from, to) > 0.0 ? bearing(to - from) : 0.0;
    };

    double hT = 0.0, hA = 0.0, hD = 0.0;
    if (std::holds_alternative<OptimalGame>(policies.target))
      hT = regime == solver::Regime::Outside ? toward(aim, cur.target) : toward(cur.target, aim);
    else
      hT = std::get<FixedHeading>(policies.target).angle;

    std::visit(
        [&](const auto &p) {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, OptimalGame>) hA = toward(cur.attacker, aim);
          else if constexpr (std::is_same_v<P, ProportionalNavigation>) hA = pn_attacker;
          else if constexpr (std::is_same_v<P, PurePursuit>) hA = toward(cur.attacker, cur.target);
          else hA = p.angle;
        },
        policies.attacker);
    std::visit(
        [&](const auto &p) {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, OptimalGame>) hD = toward(cur.defender, aim);
          else if constexpr (std::is_same_v<P, ProportionalNavigation>) hD = pn_defender;
          else if constexpr (std::is_same_v<P, PurePursuit>) hD = toward(cur.defender, cur.attacker);
          else hD = p.angle;
        },
        policies.defender);

    if (step == 0) traj.attacker_initial_heading = hA;
    traj.samples.push_back(sample_at(t, cur.target, cur.attacker, cur.defender, hT, hA, hD));

    const Vec2 vT = alpha * unit_from_angle(hT);
    const Vec2 vA = unit_from_angle(hA);
    const Vec2 vD = beta * unit_from_angle(hD);
    const double t_next =
        step + 1 >= n_steps ? opt.t_max : static_cast<double>(step + 1) * opt.dt;
    const double h = t_next - t;

    if (const auto *pn = std::get_if<ProportionalNavigation>(&policies.attacker))
      pn_attacker += h * pn_heading_rate({cur.attacker, vA}, {cur.target, vT}, pn->nav_constant);
    if (const auto *pn = std::get_if<ProportionalNavigation>(&policies.defender))
      pn_defender += h * pn_heading_rate({cur.defender, vD}, {cur.attacker, vA}, pn->nav_constant);

    const auto hit_d = detail::first_crossing(cur.defender - cur.attacker, vD - vA, r_c, h);
    const auto hit_a = detail::first_crossing(cur.target - cur.attacker, vT - vA, r_a, h);
    if (hit_d || hit_a) {
      const bool defender_first = hit_d && (!hit_a || *hit_d <= *hit_a);
      const double s = defender_first ? *hit_d : *hit_a;
      const Vec2 T = cur.target + s * vT, A = cur.attacker + s * vA, D = cur.defender + s * vD;
      if (s > 0.0) traj.samples.push_back(sample_at(t + s, T, A, D, hT, hA, hD));
      if (defender_first)
        out.outcome = DefenderIntercepts{t + s, distance(A, T), A};
      else
        out.outcome = AttackerCaptures{t + s};
      return out;
    }

    cur.target += h * vT;
    cur.attacker += h * vA;
    cur.defender += h * vD;
    t = t_next;
    if (step + 1 >= n_steps) {
      traj.samples.push_back(sample_at(t, cur.target, cur.attacker, cur.defender, hT, hA, hD));
      out.outcome = Timeout{opt.t_max};
      return out;
    }
  }
}

} // namespace tad::sim
