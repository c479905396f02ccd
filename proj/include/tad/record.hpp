#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "tad/scenario.hpp"
#include "tad/simulator.hpp"
#include "tad/solver.hpp"

namespace tad::io {

inline constexpr const char *kToolName = "tad";
inline constexpr const char *kToolVersion = "1.0.0";

using json = nlohmann::ordered_json;

/// Shortest text that parses back to the same double, never more than 17
/// significant digits.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

inline json point(const Vec2 &p) { return json::array({p.x, p.y}); }

inline json scenario_json(const Scenario &s) {
  json j;
  j["target"] = point(s.target);
  j["attacker"] = point(s.attacker);
  j["defender"] = point(s.defender);
  j["alpha"] = s.alpha;
  j["gamma"] = s.gamma;
  j["capture_radius_defender"] = s.capture_radius_defender;
  j["capture_radius_attacker"] = s.capture_radius_attacker;
  return j;
}

inline json headings_json(const solver::Headings &h) {
  return json{{"target", h.target}, {"attacker", h.attacker}, {"defender", h.defender}};
}

/// Machine-readable result of one analytic solve. Key order is fixed.
inline json solution_record(const Scenario &s, const solver::InterceptionSolution &sol) {
  json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["inputs"] = scenario_json(s);
  j["regime"] = std::string(solver::to_string(sol.regime));
  j["phi_star"] = sol.phi_star;
  j["intercept_point"] = json{{"frame", point(sol.intercept_frame)},
                              {"world", point(sol.intercept_world)}};
  j["J_star"] = sol.J_star;
  j["J_star_semantics"] = std::string(solver::cost_semantics(sol.regime));
  j["critical_alpha"] = sol.critical_alpha;
  j["escape_infeasible"] = sol.escape_infeasible;
  j["target_terminal"] = point(sol.target_terminal);
  j["headings"] = headings_json(sol.headings);
  j["t_f"] = sol.t_f;
  json cands = json::array();
  for (const auto &c : sol.candidates) {
    json row;
    row["angle"] = c.angle;
    row["cost"] = c.cost;
    if (std::isfinite(c.residual)) row["residual"] = c.residual;
    else row["residual"] = nullptr;
    row["root_modulus"] = c.modulus;
    row["root_count"] = c.root_count;
    cands.push_back(row);
  }
  j["candidates"] = cands;
  j["metadata"] = json{{"root_finder", "aberth-ehrlich"},
                       {"grid_fallback", sol.grid_fallback},
                       {"deterministic", true}};
  return j;
}

inline std::string dump(const json &j) { return j.dump(2) + "\n"; }

inline constexpr const char *kTrajectoryHeader = "t,x_T,y_T,x_A,y_A,x_D,y_D,R,r,theta";

inline std::string trajectory_csv(const sim::Trajectory &traj) {
  std::string out = kTrajectoryHeader;
  out += '\n';
  for (const auto &s : traj.samples) {
    double theta = 0.0;
    if (s.R > 0.0 && s.r > 0.0) theta = sim::reduce_state(s).theta;
    for (double v : {s.t, s.target.x, s.target.y, s.attacker.x, s.attacker.y, s.defender.x,
                     s.defender.y, s.R, s.r, theta}) {
      out += format_double(v);
      out += ',';
    }
    out.back() = '\n';
  }
  return out;
}

inline json policy_json(const sim::GuidancePolicy &p) {
  return std::visit(
      [](const auto &v) -> json {
        using P = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<P, sim::OptimalGame>) return json{{"kind", "optimal"}};
        else if constexpr (std::is_same_v<P, sim::ProportionalNavigation>)
          return json{{"kind", "pn"}, {"nav_constant", v.nav_constant}};
        else if constexpr (std::is_same_v<P, sim::PurePursuit>) return json{{"kind", "pure-pursuit"}};
        else return json{{"kind", "fixed"}, {"angle", v.angle}};
      },
      p);
}

inline json outcome_record(const Scenario &s, const sim::Policies &policies,
                           const sim::RunOptions &opt, const sim::RunResult &res) {
  json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["inputs"] = scenario_json(s);
  std::visit(
      [&](const auto &o) {
        using O = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<O, sim::DefenderIntercepts>) {
          j["outcome"] = "defender_intercepts";
          j["t_f"] = o.t_f;
          j["R_final"] = o.R_final;
          j["intercept_point"] = point(o.point);
        } else if constexpr (std::is_same_v<O, sim::AttackerCaptures>) {
          j["outcome"] = "attacker_captures";
          j["t"] = o.t;
        } else {
          j["outcome"] = "timeout";
          j["t_max"] = o.t_max;
        }
      },
      res.outcome);
  j["samples"] = res.trajectory.samples.size();
  j["metadata"] = json{{"dt", opt.dt},
                       {"t_max", opt.t_max},
                       {"resolve_stride", opt.resolve_stride},
                       {"policies", json{{"target", policy_json(policies.target)},
                                         {"attacker", policy_json(policies.attacker)},
                                         {"defender", policy_json(policies.defender)}}},
                       {"attacker_initial_heading", res.trajectory.attacker_initial_heading},
                       {"pn_initial_heading_rule", "pure-pursuit bearing at t=0"},
                       {"integrator", "explicit-euler"}};
  return j;
}

} // namespace tad::io
