// One line per acceptance criterion; exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <string>

#include "support.hpp"
#include "tad/geometry.hpp"
#include "tad/simulator.hpp"
#include "tad/solver.hpp"
#include "tad/tpbvp.hpp"

using namespace tad;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const std::string &id, bool pass, const std::string &detail) {
  std::printf("%s [%s] %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::vector<double> sorted_angles(const std::vector<sextic::cplx> &roots) {
  std::vector<double> out;
  for (const auto &z : roots) out.push_back(wrap_angle(std::arg(z)));
  std::sort(out.begin(), out.end());
  return out;
}

double r_final(const sim::RunResult &r) {
  const auto *hit = std::get_if<sim::DefenderIntercepts>(&r.outcome);
  return hit ? hit->R_final : std::numeric_limits<double>::quiet_NaN();
}

void example_one() {
  const auto t0 = Clock::now();
  const auto sol = solver::solve(fx::example1());
  const double elapsed = seconds_since(t0);
  const auto ang = sorted_angles(sol.roots);
  const std::vector<double> printed{-2.9596, -2.8573, 0.0001, 0.0001, 0.2186, 0.2254};
  double worst = 0.0;
  for (std::size_t k = 0; k < 6; ++k) worst = std::max(worst, std::abs(ang[k] - printed[k]));
  const bool ok = near(sol.geom.a, 18.22, 0.01) && near(sol.geom.r_A, 17.78, 0.01) &&
                  ang.size() == 6 && worst <= 5e-4 && near(sol.phi_star, 0.2186, 5e-4) &&
                  near(sol.intercept_world.x, 0.8676, 1e-3) &&
                  near(sol.intercept_world.y, 3.8555, 1e-3) && elapsed < 0.010;
  report("1", ok,
         fmt("Example 1: a=%.4f r_A=%.4f worst angle err=%.1e phi*=%.5f I*=(%.4f, %.4f) in %.2f ms",
             sol.geom.a, sol.geom.r_A, worst, sol.phi_star, sol.intercept_world.x,
             sol.intercept_world.y, elapsed * 1e3));
}

void example_two() {
  const auto t0 = Clock::now();
  const auto sol = solver::solve(fx::example2());
  const double elapsed = seconds_since(t0);
  const bool ok = near(sol.geom.a, 82.823, 0.01) && near(sol.geom.r_A, 82.605, 0.01) &&
                  near(sol.critical_alpha, 0.436, 1e-3) && near(sol.phi_star, 0.0429, 5e-4) &&
                  near(sol.intercept_world.x, 0.293, 2e-3) &&
                  near(sol.intercept_world.y, 3.539, 2e-3) && elapsed < 0.010;
  report("2", ok,
         fmt("Example 2: a=%.4f r_A=%.4f alpha_bar=%.5f phi*=%.5f I*=(%.4f, %.4f) in %.2f ms",
             sol.geom.a, sol.geom.r_A, sol.critical_alpha, sol.phi_star, sol.intercept_world.x,
             sol.intercept_world.y, elapsed * 1e3));
}

void example_three() {
  const Scenario s = fx::example3();
  const auto t0 = Clock::now();
  const double J = solver::solve(s).J_star;
  sim::Policies pol;
  pol.attacker = sim::ProportionalNavigation{3.0};
  const auto res = sim::run(s, pol);
  const double elapsed = seconds_since(t0);
  const double R = r_final(res);
  const bool intercepted = std::holds_alternative<sim::DefenderIntercepts>(res.outcome);
  const bool ok = near(J, 5.373, 1e-2) && intercepted && std::abs(R - 5.609) <= 0.05 * 5.609 &&
                  R > J && elapsed < 5.0;
  report("3", ok,
         fmt("Example 3: J*=%.4f PN(3) run %s R_final=%.4f (%.2f%% from 5.609) in %.2f s", J,
             intercepted ? "defender_intercepts" : "NOT intercepted", R,
             100.0 * std::abs(R - 5.609) / 5.609, elapsed));
}

void tpbvp_cross_check() {
  bool ok = true;
  std::string detail;
  for (const Scenario &s : {fx::example1(), fx::example2()}) {
    const auto an = solver::solve(s);
    const auto t0 = Clock::now();
    const auto num = tpbvp::solve_tpbvp(s);
    const double elapsed = seconds_since(t0);
    const double miss = distance(num.intercept_point, an.intercept_world);
    const double rel = std::abs(num.terminal_R - std::abs(an.J_star)) / std::abs(an.J_star);
    ok = ok && miss <= 0.05 && rel <= 0.02 && elapsed < 2.0;
    detail += fmt(" |I-I*|=%.4f R(t_f)=%.5f vs %.5f (%.2f%%) %.0f ms;", miss, num.terminal_R,
                  std::abs(an.J_star), 100.0 * rel, elapsed * 1e3);
  }
  report("4", ok, "TPBVP vs analytic:" + detail);
}

void oracle_equivalence() {
  const auto t0 = Clock::now();
  const fx::CircleTable table(1'000'000);
  std::mt19937_64 rng(20240601);
  double worst_phi = 0.0, worst_cost = 0.0;
  for (int i = 0; i < 500; ++i) {
    const Scenario s = fx::random_scenario(rng);
    const auto sol = solver::solve(s);
    const auto oracle = fx::grid_oracle(s, table);
    worst_phi = std::max(worst_phi, angle_distance(sol.phi_star, oracle.phi));
    worst_cost = std::max(worst_cost, std::abs(sol.J_star - oracle.cost) / (sol.geom.N + sol.geom.M));
  }
  const double elapsed = seconds_since(t0);
  report("5", worst_phi < 1e-4 && worst_cost < 1e-6 && elapsed < 60.0,
         fmt("500 random scenarios vs 1e6-point grid: max dphi=%.2e rad, max dJ/(N+M)=%.2e, %.1f s",
             worst_phi, worst_cost, elapsed));
}

void properties() {
  std::mt19937_64 rng(7);
  bool all = true;
  auto sub = [&](const char *id, bool pass, const std::string &detail) {
    report(std::string("6") + id, pass, detail);
    all = all && pass;
  };

  {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const double x_A = fx::uniform(rng, 0.1, 20.0), gamma = fx::uniform(rng, 0.05, 0.98);
      const auto c = geometry::da_circle(x_A, gamma);
      for (int k = 0; k < 1000; ++k) {
        const Vec2 p = c.point_at(fx::uniform(rng, -std::numbers::pi, std::numbers::pi));
        worst = std::max(worst, std::abs(distance({x_A, 0}, p) / distance({-x_A, 0}, p) - gamma));
      }
    }
    sub("a", worst < 1e-9, fmt("Apollonius ratio on 10000 boundary points: max err %.2e", worst));
  }
  {
    double worst = 0.0;
    int n = 0;
    while (n < 1000) {
      const double x_A = fx::uniform(rng, 0.5, 10.0), gamma = fx::uniform(rng, 0.2, 0.95);
      const auto c = geometry::da_circle(x_A, gamma);
      const Vec2 t{fx::uniform(rng, c.center.x - c.radius, c.center.x + c.radius),
                   fx::uniform(rng, -c.radius, c.radius)};
      if (geometry::classify_target(t, c) != geometry::Region::Inside) continue;
      const double ab = geometry::critical_alpha(t, x_A, gamma);
      if (!(ab > 0.01 && ab < 0.99)) continue;
      const auto at = geometry::at_circle(t, x_A, ab);
      worst = std::max(worst, std::abs(distance(at.center, c.center) - (c.radius - at.radius)) / c.radius);
      ++n;
    }
    sub("b", worst < 1e-8, fmt("tangency at critical alpha, 1000 interior Targets: max rel err %.2e", worst));
  }

  double worst_unit = 0.0, worst_stat = 0.0, worst_costate = 0.0;
  int sign_violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const tpbvp::ReducedState x{fx::uniform(rng, 0.3, 20.0), fx::uniform(rng, 0.3, 20.0),
                                fx::uniform(rng, -3.1, 3.1), 0.0};
    const tpbvp::Costate l{fx::uniform(rng, -2, 2), fx::uniform(rng, -2, 2),
                           fx::uniform(rng, -5, 5)};
    const double alpha = fx::uniform(rng, 0.1, 0.9), beta = 1.0 / fx::uniform(rng, 0.2, 0.95);
    const auto h = tpbvp::optimal_headings(x, l, alpha, beta);
    for (const auto &p : {h.phi, h.psi, h.chi})
      worst_unit = std::max(worst_unit, std::abs(p.sin * p.sin + p.cos * p.cos - 1.0));
    const double ang[3] = {h.phi.angle(), h.psi.angle(), h.chi.angle()};
    auto H = [&](int which, double d) {
      return tpbvp::hamiltonian(x, l,
                                tpbvp::HeadingTriple::from_angles(ang[0] + (which == 0) * d,
                                                                  ang[1] + (which == 1) * d,
                                                                  ang[2] + (which == 2) * d),
                                alpha, beta);
    };
    const double c = H(0, 0.0);
    for (int w = 0; w < 3; ++w) {
      worst_stat = std::max(worst_stat, std::abs(H(w, 1e-6) - H(w, -1e-6)) / 2e-6);
      const double second = (H(w, 1e-3) - 2.0 * c + H(w, -1e-3)) / 1e-6;
      if (w < 2 ? !(second > 0.0) : !(second < 0.0)) ++sign_violations;
    }
    const auto dl = tpbvp::costate_dynamics(x, l, h, alpha, beta);
    const double an[3] = {dl.lam_R, dl.lam_r, dl.lam_theta};
    for (int w = 0; w < 3; ++w) {
      const double base = w == 0 ? x.R : w == 1 ? x.r : x.theta;
      const double e = 1e-5 * std::max(1.0, std::abs(base));
      auto f = [&](double d) {
        auto y = x;
        (w == 0 ? y.R : w == 1 ? y.r : y.theta) += d;
        return tpbvp::hamiltonian(y, l, h, alpha, beta);
      };
      const double fd = -(f(e) - f(-e)) / (2.0 * e);
      worst_costate = std::max(worst_costate, std::abs(an[w] - fd) / std::max(std::abs(an[w]), 1e-3));
    }
  }
  sub("c", worst_unit < 1e-12, fmt("sin^2+cos^2=1 on 1000 draws: max err %.2e", worst_unit));
  sub("d", worst_stat < 1e-6, fmt("dH/d(heading) at optimal headings: max %.2e", worst_stat));
  sub("e", sign_violations == 0,
      fmt("second-derivative signs (+,+,-) on 1000 draws: %d violations", sign_violations));
  sub("f", worst_costate < 1e-6,
      fmt("co-state = -dH/dx by central differences: max rel err %.2e", worst_costate));

  {
    double worst = 0.0;
    for (const Scenario &s : {fx::example1(), fx::example2(), fx::example3()}) {
      const auto sol = tpbvp::solve_tpbvp(s);
      for (std::size_t k = 0; k < sol.states.size(); ++k) {
        const auto h = tpbvp::optimal_headings(sol.states[k], sol.costates[k], s.alpha, s.beta());
        worst = std::max(worst, std::abs(tpbvp::hamiltonian(sol.states[k], sol.costates[k], h, s.alpha, s.beta())));
      }
    }
    sub("g", worst < 1e-6, fmt("|H| along converged TPBVP trajectories (Examples 1-3): max %.2e", worst));
  }
  {
    double worst = 0.0;
    std::string detail;
    for (const Scenario &s : {fx::example1(), fx::example2(), fx::example3()}) {
      sim::Policies pol;
      if (s.alpha == 0.6) pol.attacker = sim::ProportionalNavigation{3.0};
      sim::RunOptions fine;
      fine.dt = 5e-4;
      const double a = r_final(sim::run(s, pol)), b = r_final(sim::run(s, pol, fine));
      const double rel = std::abs(a - b) / std::abs(b);
      worst = std::max(worst, std::isfinite(rel) ? rel : 1.0);
      detail += fmt(" %.5f->%.5f", a, b);
    }
    sub("h", worst < 2e-3, fmt("dt 1e-3 -> 5e-4 changes R_final by at most %.3f%%:", 100.0 * worst) + detail);
  }
  {
    double worst_phi = 0.0, worst_i = 0.0;
    for (int i = 0; i < 500; ++i) {
      const Scenario s = fx::random_scenario(rng);
      const double rot = fx::uniform(rng, -3.0, 3.0), k = fx::uniform(rng, 0.1, 10.0);
      const Vec2 shift{fx::uniform(rng, -50, 50), fx::uniform(rng, -50, 50)};
      auto move = [&](const Vec2 &p) {
        return shift + k * Vec2{std::cos(rot) * p.x - std::sin(rot) * p.y,
                                std::sin(rot) * p.x + std::cos(rot) * p.y};
      };
      Scenario m = s;
      m.target = move(s.target);
      m.attacker = move(s.attacker);
      m.defender = move(s.defender);
      const auto a = solver::solve(s), b = solver::solve(m);
      worst_phi = std::max(worst_phi, angle_distance(a.phi_star, b.phi_star));
      worst_i = std::max(worst_i, distance(k * a.intercept_frame, b.intercept_frame) / b.geom.r_A);
    }
    sub("i", worst_phi < 1e-8 && worst_i < 1e-9,
        fmt("scale/rotation/translation invariance on 500 scenarios: dphi=%.2e, dI/r_A=%.2e",
            worst_phi, worst_i));
  }
  report("6", all, "property suites");
}

void alpha_sweep() {
  Scenario s = fx::example2();
  const double from = 0.3, to = 0.7;
  const int steps = 41;
  const double step = (to - from) / (steps - 1);
  int flips = 0;
  double flip_at = std::numeric_limits<double>::quiet_NaN();
  bool prev = false;
  for (int k = 0; k < steps; ++k) {
    s.alpha = from + step * k;
    const bool infeasible = solver::solve(s).escape_infeasible;
    if (k > 0 && infeasible != prev) {
      ++flips;
      flip_at = s.alpha - 0.5 * step;
    }
    prev = infeasible;
  }
  report("7", flips == 1 && std::abs(flip_at - 0.436) <= step,
         fmt("alpha sweep 0.3..0.7 (41 pts) on Example 2: %d flip(s), at %.3f (step %.3f)", flips,
             flip_at, step));
}

} // namespace

int main() {
  const std::pair<const char *, void (*)()> criteria[] = {
      {"1", example_one},       {"2", example_two},         {"3", example_three},
      {"4", tpbvp_cross_check}, {"5", oracle_equivalence},  {"6", properties},
      {"7", alpha_sweep}};
  for (const auto &[id, fn] : criteria) {
    try {
      fn();
    } catch (const std::exception &e) {
      report(id, false, std::string("threw: ") + e.what());
    }
  }
  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
