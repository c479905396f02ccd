#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "tad/error.hpp"
#include "tad/geometry.hpp"
#include "tad/scenario.hpp"
#include "tad/sextic.hpp"
#include "tad/vec2.hpp"

namespace tad::solver {

using sextic::GameGeometry;

enum class Regime { Inside, Outside };

constexpr std::string_view to_string(Regime r) {
  return r == Regime::Inside ? "inside" : "outside";
}

/// What J_star measures in each regime.
constexpr std::string_view cost_semantics(Regime r) {
  return r == Regime::Inside ? "signed_escape_margin" : "terminal_separation";
}

/// Outside regime: |I T| + alpha |A I|, the terminal Target-Attacker separation.
inline double cost_outside(const GameGeometry &g, double phi) {
  return sextic::target_leg(g, phi) + g.alpha * sextic::attacker_leg(g, phi);
}

/// Inside regime: alpha |A I| - |I T|, negative when the Target cannot reach I
/// before the Attacker does.
inline double cost_inside(const GameGeometry &g, double phi) {
  return g.alpha * sextic::attacker_leg(g, phi) - sextic::target_leg(g, phi);
}

inline sextic::Branch branch_of(Regime regime) {
  return regime == Regime::Inside ? sextic::Branch::Inside : sextic::Branch::Outside;
}

inline double regime_cost(const GameGeometry &g, Regime regime, double phi) {
  return regime == Regime::Inside ? cost_inside(g, phi) : cost_outside(g, phi);
}

namespace detail {

/// Golden-section search for the extremum of the regime cost in [lo, hi].
inline double golden_refine(const GameGeometry &g, Regime regime, double lo, double hi,
                            double tol) {
  const double sign = regime == Regime::Inside ? -1.0 : 1.0;
  auto f = [&](double p) { return sign * regime_cost(g, regime, p); };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

/// Newton polish of a root angle on the stationarity residual. The sextic
/// pins an angle only to about sqrt(eps) near close root pairs; steps larger
/// than max_step or that do not shrink the residual are refused.
inline double polish_angle(const GameGeometry &g, sextic::Branch branch, double phi,
                           double max_step = 1e-6) {
  try {
    double res = sextic::stationarity_residual(g, phi, branch);
    for (int it = 0; it < 4 && res != 0.0; ++it) {
      const double slope = sextic::stationarity_slope(g, phi, branch);
      if (!(std::abs(slope) > 0.0)) break;
      const double step = res / slope;
      if (!(std::abs(step) <= max_step)) break;
      const double next = wrap_angle(phi - step);
      const double next_res = sextic::stationarity_residual(g, next, branch);
      if (!(std::abs(next_res) < std::abs(res))) break;
      phi = next;
      res = next_res;
    }
  } catch (const Error &) {
  }
  return phi;
}

} // namespace detail

/// Grid oracle: best of n_grid uniform samples over (-pi, pi], refined once
/// by golden section on the neighbouring cells.
inline double brute_force_phi(const GameGeometry &g, Regime regime, std::size_t n_grid,
                              double tol = 1e-10) {
  if (n_grid < 1000) fail(Errc::invalid_argument, "n_grid must be at least 1000");
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n_grid);
  const double sign = regime == Regime::Inside ? -1.0 : 1.0;
  // cos(phi - lambda) expanded so each sample needs a single sincos.
  const double cl = std::cos(g.lambda), sl = std::sin(g.lambda);
  const double tA = g.r_A * g.r_A + g.M * g.M, tT = g.r_A * g.r_A + g.N * g.N;
  const double kA = 2.0 * g.M * g.r_A, kT = 2.0 * g.N * g.r_A;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < n_grid; ++k) {
    const double p = -std::numbers::pi + static_cast<double>(k + 1) * step;
    const double c = std::cos(p), s = std::sin(p);
    const double leg_a = std::sqrt(std::max(0.0, tA - kA * c));
    const double leg_t = std::sqrt(std::max(0.0, tT - kT * (c * cl + s * sl)));
    const double v = sign * (regime == Regime::Inside ? g.alpha * leg_a - leg_t
                                                      : leg_t + g.alpha * leg_a);
    if (v < best) {
      best = v;
      best_k = k;
    }
  }
  const double centre = -std::numbers::pi + static_cast<double>(best_k + 1) * step;
  return wrap_angle(detail::golden_refine(g, regime, centre - step, centre + step, tol));
}

struct Headings {
  double target = 0.0;
  double attacker = 0.0;
  double defender = 0.0;
};

/// World-frame headings once the aim point I is known: A and D fly to I; the
/// Target flees along the ray I -> T (outside) or runs to I (inside).
inline Headings headings_from_aimpoint(const Scenario &s, const Vec2 &intercept, Regime regime) {
  const double scale = 1e-12 * (1.0 + norm(s.attacker - s.defender));
  auto dir = [&](const Vec2 &from, const Vec2 &to, const char *who) {
    if (distance(from, to) <= scale)
      fail(Errc::undefined_direction, std::string("interception point coincides with ") + who);
    return bearing(to - from);
  };
  Headings h;
  h.attacker = dir(s.attacker, intercept, "attacker");
  h.defender = dir(s.defender, intercept, "defender");
  h.target = regime == Regime::Outside ? dir(intercept, s.target, "target")
                                       : dir(s.target, intercept, "target");
  return h;
}

struct CandidateEval {
  double angle = 0.0;
  double cost = 0.0;
  double residual = 0.0;
  double modulus = 0.0;
  int root_count = 1;
};

struct InterceptionSolution {
  Regime regime = Regime::Outside;
  geometry::Region region = geometry::Region::Outside;
  GameGeometry geom;
  geometry::AdFrame frame;
  double phi_star = 0.0;
  Vec2 intercept_frame;
  Vec2 intercept_world;
  double J_star = 0.0;
  Vec2 target_terminal; ///< T' in world coordinates
  Headings headings;
  double t_f = 0.0; ///< |A I|, time in units of length / V_A
  double critical_alpha = 0.0;
  bool escape_infeasible = false;
  bool grid_fallback = false;
  std::vector<sextic::cplx> roots;
  std::vector<CandidateEval> candidates;
};

struct SolveOptions {
  std::size_t fallback_grid = 4096;
  double fallback_tolerance = 1e-10;
  /// Residual above which the sextic candidate is distrusted.
  double residual_limit = 1e-4;
  double tie_tolerance = 1e-12;
};

/// Analytic solution of the game from the initial positions.
inline InterceptionSolution solve(const Scenario &s, const SolveOptions &opt = {}) {
  s.validate();
  InterceptionSolution sol;
  sol.frame = geometry::build_frame(s);
  const double x_A = sol.frame.half_separation;
  const Vec2 target = sol.frame.to_frame(s.target);
  const auto circle = geometry::da_circle(x_A, s.gamma);
  sol.region = geometry::classify_target(target, circle);
  sol.regime = sol.region == geometry::Region::Inside ? Regime::Inside : Regime::Outside;
  sol.critical_alpha =
      sol.region == geometry::Region::Inside ? geometry::critical_alpha(target, x_A, s.gamma) : 0.0;
  sol.escape_infeasible = sol.regime == Regime::Inside && s.alpha <= sol.critical_alpha;
  sol.geom = sextic::build_geometry(target, x_A, s.gamma, s.alpha);
  const GameGeometry &g = sol.geom;

  const double sign = sol.regime == Regime::Inside ? -1.0 : 1.0;
  bool have_best = false;
  double best_angle = 0.0, best_cost = 0.0, best_residual = 0.0;
  try {
    sol.roots = sextic::find_roots(sextic::build_sextic(g));
    for (const auto &c : sextic::candidate_angles(g, sol.roots, branch_of(sol.regime)).entries) {
      const double cost = regime_cost(g, sol.regime, c.angle);
      sol.candidates.push_back({c.angle, cost, c.residual, c.modulus, c.root_count});
      const bool better = !have_best || sign * cost < sign * best_cost - opt.tie_tolerance;
      const bool tie = have_best && std::abs(cost - best_cost) <= opt.tie_tolerance &&
                       angle_distance(c.angle, g.lambda) < angle_distance(best_angle, g.lambda);
      if (better || tie) {
        have_best = true;
        best_angle = c.angle;
        best_cost = cost;
        best_residual = c.residual;
      }
    }
  } catch (const Error &e) {
    if (e.code() != Errc::rooting_failure) throw;
    have_best = false;
  }

  if (!have_best || !(std::abs(best_residual) <= opt.residual_limit)) {
    sol.grid_fallback = true;
    best_angle = brute_force_phi(g, sol.regime, opt.fallback_grid, opt.fallback_tolerance);
    best_cost = regime_cost(g, sol.regime, best_angle);
  }

  if (!sol.grid_fallback) {
    best_angle = detail::polish_angle(g, branch_of(sol.regime), best_angle);
    best_cost = regime_cost(g, sol.regime, best_angle);
  }
  sol.phi_star = best_angle;
  sol.J_star = best_cost;
  sol.intercept_frame = sextic::intercept_point(g, best_angle);
  sol.intercept_world = sol.frame.to_world(sol.intercept_frame);
  sol.t_f = distance(s.attacker, sol.intercept_world);
  sol.headings = headings_from_aimpoint(s, sol.intercept_world, sol.regime);
  sol.target_terminal = s.target + (s.alpha * sol.t_f) * unit_from_angle(sol.headings.target);
  return sol;
}

} // namespace tad::solver
