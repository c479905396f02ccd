#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "tad/error.hpp"
#include "tad/geometry.hpp"
#include "tad/scenario.hpp"
#include "tad/solver.hpp"
#include "tad/vec2.hpp"

/// Pontryagin formulation of the game in the reduced state (R, r, theta) and
/// its numerical solution by backward shooting from the capture manifold.
///
/// Relative headings follow the reduced-state convention: phi is the Target
/// heading measured from the line of sight A -> T, chi the Attacker heading
/// measured from A -> D (positive toward A -> T), and psi the Defender heading
/// measured from D -> A. World headings are phi + los, los + theta - chi and
/// psi + theta + los - pi, where los is the A -> T line-of-sight angle and
/// theta the signed angle from A -> T to A -> D.
namespace tad::tpbvp {

struct ReducedState {
  double R = 0.0;     ///< |A T|
  double r = 0.0;     ///< |A D|
  double theta = 0.0; ///< angle from ray A->T to ray A->D, in (-pi, pi]
  double los_angle = 0.0;
};

struct Costate {
  double lam_R = 0.0;
  double lam_r = 0.0;
  double lam_theta = 0.0;
};

struct SinCos {
  double sin = 0.0;
  double cos = 1.0;

  double angle() const { return std::atan2(sin, cos); }
  static SinCos of(double angle) { return {std::sin(angle), std::cos(angle)}; }
};

struct HeadingTriple {
  SinCos phi; ///< Target
  SinCos psi; ///< Defender
  SinCos chi; ///< Attacker
  double chi_s = 0.0;
  double chi_c = 0.0;

  static HeadingTriple from_angles(double phi, double psi, double chi) {
    return {SinCos::of(phi), SinCos::of(psi), SinCos::of(chi), 0.0, 0.0};
  }
};

inline constexpr double kSingularFloor = 1e-14;

/// Saddle-point headings: the Target and Defender minimize the Hamiltonian,
/// the Attacker maximizes it.
inline HeadingTriple optimal_headings(const ReducedState &x, const Costate &l, double alpha,
                                      double beta) {
  (void)alpha;
  (void)beta;
  HeadingTriple h;
  const double lt_r = l.lam_theta / x.r;
  const double lt_R = l.lam_theta / x.R;
  const double one_m = 1.0 - l.lam_R;

  const double dpsi = std::sqrt(l.lam_r * l.lam_r + lt_r * lt_r);
  const double dphi = std::sqrt(one_m * one_m + lt_R * lt_R);
  const double st = std::sin(x.theta), ct = std::cos(x.theta);
  h.chi_s = one_m * st - lt_R * ct + lt_r;
  h.chi_c = one_m * ct + lt_R * st - l.lam_r;
  const double dchi = std::hypot(h.chi_s, h.chi_c);
  if (!(dpsi > kSingularFloor) || !(dphi > kSingularFloor) || !(dchi > kSingularFloor))
    fail(Errc::singular_arc, "heading feedback denominator vanishes");

  h.psi = {lt_r / dpsi, l.lam_r / dpsi};
  h.phi = {lt_R / dphi, one_m / dphi};
  h.chi = {h.chi_s / dchi, h.chi_c / dchi};
  return h;
}

namespace detail {
/// sin and cos of (theta - chi).
inline SinCos theta_minus_chi(double theta, const SinCos &chi) {
  const double st = std::sin(theta), ct = std::cos(theta);
  return {st * chi.cos - ct * chi.sin, ct * chi.cos + st * chi.sin};
}
} // namespace detail

struct ReducedRates {
  double dR = 0.0;
  double dr = 0.0;
  double dtheta = 0.0;
  double dlos = 0.0; ///< line-of-sight rate, used only to recover world positions
};

inline ReducedRates reduced_dynamics(const ReducedState &x, const HeadingTriple &h, double alpha,
                                     double beta) {
  const SinCos tc = detail::theta_minus_chi(x.theta, h.chi);
  ReducedRates d;
  d.dR = alpha * h.phi.cos - tc.cos;
  d.dr = -h.chi.cos - beta * h.psi.cos;
  d.dlos = (alpha * h.phi.sin - tc.sin) / x.R;
  d.dtheta = -d.dlos + (h.chi.sin - beta * h.psi.sin) / x.r;
  return d;
}

/// Co-state rates, -dH/dx.
inline Costate costate_dynamics(const ReducedState &x, const Costate &l, const HeadingTriple &h,
                                double alpha, double beta) {
  const SinCos tc = detail::theta_minus_chi(x.theta, h.chi);
  return {l.lam_theta / (x.R * x.R) * (tc.sin - alpha * h.phi.sin),
          l.lam_theta / (x.r * x.r) * (h.chi.sin - beta * h.psi.sin),
          (1.0 - l.lam_R) * tc.sin - l.lam_theta / x.R * tc.cos};
}

inline double hamiltonian(const ReducedState &x, const Costate &l, const HeadingTriple &h,
                          double alpha, double beta) {
  const SinCos tc = detail::theta_minus_chi(x.theta, h.chi);
  const double theta_rate = -alpha / x.R * h.phi.sin + tc.sin / x.R - beta / x.r * h.psi.sin +
                            h.chi.sin / x.r;
  return tc.cos - alpha * h.phi.cos + (alpha * h.phi.cos - tc.cos) * l.lam_R -
         (h.chi.cos + beta * h.psi.cos) * l.lam_r + theta_rate * l.lam_theta;
}

/// lambda_r at capture from H(t_f) = 0 with lambda_R = lambda_theta = 0:
/// (b^2 - 1) l^2 + 2 (a b + cos theta_f) l + a^2 - 1 = 0. The root kept is the
/// one for which the Defender closes on the Attacker (dr/dt < 0).
inline double terminal_lambda_r(double theta_f, double alpha, double beta) {
  if (!(beta > 1.0)) fail(Errc::unsupported_regime, "beta must exceed 1");
  const double qa = beta * beta - 1.0;
  const double qb = 2.0 * (alpha * beta + std::cos(theta_f));
  const double qc = alpha * alpha - 1.0;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) fail(Errc::infeasible_terminal, "negative discriminant for lambda_r(t_f)");
  const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
  std::array<double, 2> roots{q / qa, q != 0.0 ? qc / q : 0.0};

  const ReducedState at{1.0, 1.0, theta_f, 0.0};
  std::optional<double> pick;
  double best_rate = 0.0;
  for (double lr : roots) {
    if (lr == 0.0) {
      if (!pick) pick = lr;
      continue;
    }
    const HeadingTriple h = optimal_headings(at, {0.0, lr, 0.0}, alpha, beta);
    const double rate = reduced_dynamics(at, h, alpha, beta).dr;
    if (rate < 0.0 && (!pick || *pick == 0.0 || rate < best_rate)) {
      pick = lr;
      best_rate = rate;
    }
  }
  if (!pick) fail(Errc::infeasible_terminal, "no closing root for lambda_r(t_f)");
  return *pick;
}

/// Relative headings to world-frame headings.
inline solver::Headings world_headings(const ReducedState &x, const HeadingTriple &h) {
  return {wrap_angle(h.phi.angle() + x.los_angle),
          wrap_angle(x.los_angle + x.theta - h.chi.angle()),
          wrap_angle(h.psi.angle() + x.theta + x.los_angle - std::numbers::pi)};
}

/// Reduced coordinates of a world-frame configuration.
inline ReducedState reduce(const Vec2 &target, const Vec2 &attacker, const Vec2 &defender) {
  if (target == attacker || defender == attacker)
    fail(Errc::undefined_direction, "coincident agents have no reduced state");
  const double los = bearing(target - attacker);
  return {distance(attacker, target), distance(attacker, defender),
          wrap_angle(bearing(defender - attacker) - los), los};
}

struct ShootingUnknowns {
  double R_f = 0.0;
  double theta_f = 0.0;
  double t_f = 0.0;
};

/// Newton failure; carries the best iterate found.
class ShootingError : public Error {
public:
  ShootingError(Errc code, const std::string &what, ShootingUnknowns best, double residual)
      : Error(code, what), best_(best), residual_(residual) {}
  const ShootingUnknowns &best_iterate() const { return best_; }
  double best_residual() const { return residual_; }

private:
  ShootingUnknowns best_;
  double residual_;
};

struct TpbvpOptions {
  int steps = 2000;
  double halving_tolerance = 1e-6;
  int max_refinements = 3;
  int max_newton = 50;
  double fd_relative_step = 1e-7;
  int max_halvings = 8;
  double tolerance = 1e-8; ///< scaled by max(R0, r0, 1)
};

struct TpbvpSolution {
  std::vector<double> times;
  std::vector<ReducedState> states;
  std::vector<Costate> costates;
  std::vector<Vec2> target_path;
  std::vector<Vec2> attacker_path;
  std::vector<Vec2> defender_path;
  ShootingUnknowns unknowns;
  double t_f = 0.0;
  double terminal_R = 0.0;
  double terminal_lambda_r = 0.0;
  Vec2 intercept_point;
  int newton_iterations = 0;
  double residual_norm = 0.0;
  double halving_change = 0.0;
  int steps = 0;
  /// lambda_theta vanished along the whole arc (straight-line extremal).
  bool degenerate_extremal = false;
};

namespace detail {

/// State, co-state, relative line of sight and relative Attacker position.
using Augmented = std::array<double, 9>;

inline Augmented backward_rhs(const Augmented &y, double alpha, double beta) {
  const ReducedState x{y[0], y[1], y[2], y[6]};
  const Costate l{y[3], y[4], y[5]};
  const HeadingTriple h = optimal_headings(x, l, alpha, beta);
  const ReducedRates d = reduced_dynamics(x, h, alpha, beta);
  const Costate dl = costate_dynamics(x, l, h, alpha, beta);
  const double heading = y[6] + y[2] - h.chi.angle();
  return {-d.dR, -d.dr, -d.dtheta, -dl.lam_R, -dl.lam_r, -dl.lam_theta, -d.dlos,
          -std::cos(heading), -std::sin(heading)};
}

inline Augmented terminal_point(const ShootingUnknowns &u, double r_c, double alpha,
                                double beta) {
  return {u.R_f, r_c, u.theta_f, 0.0, terminal_lambda_r(u.theta_f, alpha, beta), 0.0,
          0.0, 0.0, 0.0};
}

/// Classical RK4 from t_f back to 0 on a mesh graded quadratically toward
/// capture, tau_k = t_f (k / n)^2. The Defender's final turn onto the Attacker
/// happens on a time scale of r_c / (1 + beta).
template <class Visitor>
Augmented integrate_backward(const ShootingUnknowns &u, double r_c, double alpha, double beta,
                             int n, Visitor &&visit) {
  Augmented y = terminal_point(u, r_c, alpha, beta);
  auto axpy = [](const Augmented &a, double h, const Augmented &k) {
    Augmented o;
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = a[i] + h * k[i];
    return o;
  };
  visit(0.0, y);
  double tau = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double s = static_cast<double>(k) / n;
    const double next = u.t_f * s * s;
    const double h = next - tau;
    const Augmented k1 = backward_rhs(y, alpha, beta);
    const Augmented k2 = backward_rhs(axpy(y, 0.5 * h, k1), alpha, beta);
    const Augmented k3 = backward_rhs(axpy(y, 0.5 * h, k2), alpha, beta);
    const Augmented k4 = backward_rhs(axpy(y, h, k3), alpha, beta);
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!(y[0] > 0.0) || !(y[1] > 0.0))
      fail(Errc::singular_configuration, "range collapsed during backward integration");
    tau = next;
    visit(tau, y);
  }
  return y;
}

inline std::array<double, 3> shooting_residual(const ShootingUnknowns &u, const ReducedState &x0,
                                               double r_c, double alpha, double beta, int n) {
  const Augmented y = integrate_backward(u, r_c, alpha, beta, n, [](double, const Augmented &) {});
  return {y[0] - x0.R, y[1] - x0.r, wrap_angle(y[2] - x0.theta)};
}

inline double residual_norm(const std::array<double, 3> &f) {
  return std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]);
}

/// Solves the 3x3 system m x = b by Gaussian elimination with partial pivoting.
inline std::optional<std::array<double, 3>> solve3(std::array<std::array<double, 3>, 3> m,
                                                   std::array<double, 3> b) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (!(std::abs(m[piv][col]) > 1e-300)) return std::nullopt;
    std::swap(m[col], m[piv]);
    std::swap(b[col], b[piv]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 3; ++c) m[r][c] -= f * m[col][c];
      b[r] -= f * b[col];
    }
  }
  std::array<double, 3> x{};
  for (int r = 2; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < 3; ++c) acc -= m[r][c] * x[c];
    x[r] = acc / m[r][r];
  }
  return x;
}

struct NewtonResult {
  ShootingUnknowns u;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline NewtonResult newton(ShootingUnknowns u, const ReducedState &x0, double r_c, double alpha,
                           double beta, int n, const TpbvpOptions &opt,
                           int min_iterations = 0) {
  const double tol = opt.tolerance * std::max({x0.R, x0.r, 1.0});
  auto eval = [&](const ShootingUnknowns &v) -> std::optional<std::array<double, 3>> {
    if (!(v.R_f > 0.0) || !(v.t_f > 0.0)) return std::nullopt;
    try {
      auto f = shooting_residual(v, x0, r_c, alpha, beta, n);
      if (!std::isfinite(residual_norm(f))) return std::nullopt;
      return f;
    } catch (const Error &) {
      return std::nullopt;
    }
  };

  NewtonResult res{u, std::numeric_limits<double>::infinity(), 0, false};
  auto f = eval(u);
  if (!f) return res;
  res.residual = residual_norm(*f);
  for (int it = 0; it < opt.max_newton; ++it) {
    if (res.residual < tol && it >= min_iterations) {
      res.converged = true;
      return res;
    }
    res.iterations = it + 1;
    std::array<std::array<double, 3>, 3> jac{};
    const std::array<double, 3> base{u.R_f, u.theta_f, u.t_f};
    for (int j = 0; j < 3; ++j) {
      std::array<double, 3> p = base;
      const double h = opt.fd_relative_step * std::max(std::abs(base[j]), 1.0);
      p[j] += h;
      const auto fp = eval({p[0], p[1], p[2]});
      if (!fp) return res;
      for (int i = 0; i < 3; ++i) jac[i][j] = ((*fp)[i] - (*f)[i]) / h;
    }
    const auto step = solve3(jac, {-(*f)[0], -(*f)[1], -(*f)[2]});
    if (!step) return res;

    double scale = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= opt.max_halvings; ++halving, scale *= 0.5) {
      const ShootingUnknowns trial{u.R_f + scale * (*step)[0],
                                   wrap_angle(u.theta_f + scale * (*step)[1]),
                                   u.t_f + scale * (*step)[2]};
      const auto ft = eval(trial);
      if (ft && residual_norm(*ft) < res.residual) {
        u = trial;
        f = ft;
        res.u = u;
        res.residual = residual_norm(*ft);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.converged = res.residual < tol;
      return res;
    }
  }
  res.converged = res.residual < tol;
  return res;
}

/// theta_f solving theta - chi(theta) = delta on the capture manifold, where
/// delta is the angle between the Attacker's final heading and the final line
/// of sight.
inline std::optional<double> terminal_theta_for(double delta, double alpha, double beta) {
  auto g = [&](double th) {
    const double lr = terminal_lambda_r(th, alpha, beta);
    const double tc = std::atan2(-lr * std::sin(th), 1.0 - lr * std::cos(th));
    return wrap_angle(tc - delta);
  };
  constexpr int samples = 720;
  std::optional<double> best;
  double best_abs = std::numeric_limits<double>::infinity();
  double prev_th = -std::numbers::pi;
  double prev = g(prev_th);
  for (int k = 1; k <= samples; ++k) {
    const double th = -std::numbers::pi + 2.0 * std::numbers::pi * k / samples;
    const double cur = g(th);
    if (prev * cur <= 0.0 && std::abs(prev - cur) < std::numbers::pi) {
      double lo = prev_th, hi = th, flo = prev;
      for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = g(mid);
        if (flo * fm <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      const double root = 0.5 * (lo + hi);
      if (std::abs(g(root)) < best_abs) {
        best_abs = std::abs(g(root));
        best = root;
      }
    }
    prev_th = th;
    prev = cur;
  }
  return best;
}

} // namespace detail

/// Initial guess for (R_f, theta_f, t_f) from the analytic saddle point.
inline std::optional<ShootingUnknowns> seed_from_solution(const Scenario &s,
                                                          const solver::InterceptionSolution &sol) {
  const double beta = s.beta();
  const double delta = wrap_angle(sol.headings.attacker - sol.headings.target);
  const auto theta = detail::terminal_theta_for(delta, s.alpha, beta);
  if (!theta) return std::nullopt;
  const double r_c = s.capture_radius_defender;
  return ShootingUnknowns{std::max(std::abs(sol.J_star), r_c), *theta,
                          std::max(sol.t_f - r_c / (1.0 + beta), 1e-6)};
}

/// Collision-triangle guess: the Attacker flies straight at the Target, the
/// Defender meets it head-on along that line, the Target runs along the line
/// of sight. theta_f is left for the caller to scan.
inline ShootingUnknowns cold_seed(const Scenario &s) {
  const double beta = s.beta();
  const Vec2 u = (s.target - s.attacker) / distance(s.attacker, s.target);
  const Vec2 w = s.attacker - s.defender;
  const double qa = beta * beta - 1.0, qb = -2.0 * dot(w, u), qc = -dot(w, w);
  const double t = (-qb + std::sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa);
  const double R = distance(s.attacker, s.target) + (s.alpha - 1.0) * t;
  return {std::max(R, 1e-3), 0.0, t};
}

/// Solves the two-point boundary-value problem by backward shooting from the
/// capture manifold r(t_f) = r_c, lambda_R = lambda_theta = 0. Newton iterates
/// on (R_f, theta_f, t_f) until the integrated initial state matches the
/// scenario; the mesh is doubled until halving the step moves the solution by
/// less than halving_tolerance.
inline TpbvpSolution solve_tpbvp(const Scenario &s, const TpbvpOptions &opt = {},
                                 std::optional<ShootingUnknowns> seed = std::nullopt) {
  s.validate();
  const double r_c = s.capture_radius_defender;
  if (!(r_c > 0.0))
    fail(Errc::invalid_argument, "capture_radius_defender must be positive for shooting");
  const double alpha = s.alpha, beta = s.beta();
  const ReducedState x0 = reduce(s.target, s.attacker, s.defender);
  if (x0.r <= r_c) fail(Errc::invalid_argument, "defender already within capture radius");

  if (!seed) {
    try {
      seed = seed_from_solution(s, solver::solve(s));
    } catch (const Error &) {
      seed.reset();
    }
  }

  int n = opt.steps;
  detail::NewtonResult best{ShootingUnknowns{}, std::numeric_limits<double>::infinity(), 0, false};
  auto attempt = [&](const ShootingUnknowns &start) {
    auto r = detail::newton(start, x0, r_c, alpha, beta, n, opt);
    if (r.residual < best.residual) best = r;
    return r.converged;
  };

  bool ok = seed && attempt(*seed);
  if (!ok) {
    ShootingUnknowns cold = seed ? *seed : cold_seed(s);
    constexpr int scan = 24;
    for (int k = 0; k < scan && !ok; ++k) {
      cold.theta_f = -std::numbers::pi + 2.0 * std::numbers::pi * (k + 0.5) / scan;
      ok = attempt(cold);
    }
  }
  if (!ok)
    throw ShootingError(Errc::non_convergence, "non-convergence: shooting did not converge",
                        best.u, best.residual);

  // Mesh refinement check.
  double change = std::numeric_limits<double>::infinity();
  int total_iterations = best.iterations;
  for (int refine = 0; refine <= opt.max_refinements; ++refine) {
    const ShootingUnknowns coarse = best.u;
    const int coarse_n = n;
    n *= 2;
    auto fine = detail::newton(coarse, x0, r_c, alpha, beta, n, opt, 1);
    if (!fine.converged)
      throw ShootingError(Errc::non_convergence, "non-convergence: refined mesh diverged",
                          best.u, best.residual);
    change = std::max({std::abs(fine.u.R_f - coarse.R_f),
                       angle_distance(fine.u.theta_f, coarse.theta_f),
                       std::abs(fine.u.t_f - coarse.t_f)});
    if (change < opt.halving_tolerance) {
      n = coarse_n;
      break;
    }
    best = fine;
    total_iterations += fine.iterations;
  }

  TpbvpSolution out;
  out.unknowns = best.u;
  out.t_f = best.u.t_f;
  out.terminal_R = best.u.R_f;
  out.terminal_lambda_r = terminal_lambda_r(best.u.theta_f, alpha, beta);
  out.newton_iterations = total_iterations;
  out.residual_norm = best.residual;
  out.halving_change = change;
  out.steps = n;

  std::vector<double> tau;
  std::vector<detail::Augmented> ys;
  detail::integrate_backward(best.u, r_c, alpha, beta, n, [&](double t, const detail::Augmented &y) {
    tau.push_back(t);
    ys.push_back(y);
  });

  // The relative line of sight and Attacker path are known up to a rotation
  // and translation fixed by the initial configuration.
  const detail::Augmented &start = ys.back();
  const double rot = x0.los_angle - start[6];
  const double cr = std::cos(rot), sr = std::sin(rot);
  const Vec2 anchor{start[7], start[8]};
  double max_lam_theta = 0.0;
  for (std::size_t k = ys.size(); k-- > 0;) {
    const auto &y = ys[k];
    const Vec2 rel = Vec2{y[7], y[8]} - anchor;
    const Vec2 a = s.attacker + Vec2{cr * rel.x - sr * rel.y, sr * rel.x + cr * rel.y};
    const double los = y[6] + rot;
    out.times.push_back(best.u.t_f - tau[k]);
    out.states.push_back({y[0], y[1], wrap_angle(y[2]), wrap_angle(los)});
    out.costates.push_back({y[3], y[4], y[5]});
    out.attacker_path.push_back(a);
    out.target_path.push_back(a + y[0] * unit_from_angle(los));
    out.defender_path.push_back(a + y[1] * unit_from_angle(los + y[2]));
    max_lam_theta = std::max(max_lam_theta, std::abs(y[5]));
  }
  out.times.front() = 0.0;
  out.intercept_point = out.attacker_path.back();
  out.degenerate_extremal = max_lam_theta < 1e-12;
  return out;
}

} // namespace tad::tpbvp
