#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tad/error.hpp"
#include "tad/geometry.hpp"
#include "tad/record.hpp"
#include "tad/scenario_file.hpp"
#include "tad/sextic.hpp"
#include "tad/simulator.hpp"
#include "tad/solver.hpp"

namespace tad::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kNumerical = 3 };

inline void write_file(const std::filesystem::path &path, const std::string &text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::invalid_argument, "output: cannot write '" + path.string() + "'");
  out << text;
}

inline io::json cmd_solve(const std::string &scenario_path,
                          const std::optional<std::string> &out_path, std::ostream &out) {
  const auto file = io::load_scenario(scenario_path);
  const auto sol = solver::solve(file.scenario);
  const io::json record = io::solution_record(file.scenario, sol);
  const auto target = out_path ? out_path : file.output.solution;
  if (target)
    write_file(*target, io::dump(record));
  else
    out << io::dump(record);
  return record;
}

inline sim::RunResult cmd_simulate(const std::string &scenario_path,
                                   const std::optional<std::string> &out_dir, std::ostream &out) {
  const auto file = io::load_scenario(scenario_path);
  if (!file.simulation) fail(Errc::invalid_argument, "simulation: block required for simulate");
  const auto &spec = *file.simulation;
  auto res = sim::run(file.scenario, spec.policies, spec.run);
  const std::filesystem::path dir = out_dir.value_or(file.output.trajectory_dir.value_or("."));
  write_file(dir / "trajectory.csv", io::trajectory_csv(res.trajectory));
  const io::json record = io::outcome_record(file.scenario, spec.policies, spec.run, res);
  write_file(dir / "outcome.json", io::dump(record));
  out << record["outcome"].get<std::string>();
  if (record.contains("R_final")) out << " R_final=" << io::format_double(record["R_final"]);
  if (record.contains("t_f")) out << " t_f=" << io::format_double(record["t_f"]);
  out << '\n';
  return res;
}

inline double cmd_critical_alpha(const std::string &scenario_path, std::ostream &out) {
  const auto file = io::load_scenario(scenario_path);
  const auto frame = geometry::build_frame(file.scenario);
  const double value = geometry::critical_alpha(frame.to_frame(file.scenario.target),
                                                frame.half_separation, file.scenario.gamma);
  out << io::format_double(value) << '\n';
  return value;
}

struct SweepSpec {
  std::string param;
  double from = 0.0;
  double to = 0.0;
  int steps = 1;
};

inline std::string cmd_sweep(const std::string &scenario_path, const SweepSpec &spec,
                             const std::optional<std::string> &out_path, std::ostream &out) {
  const auto file = io::load_scenario(scenario_path);
  if (spec.param != "alpha" && spec.param != "gamma" && spec.param != "target_x" &&
      spec.param != "target_y")
    fail(Errc::invalid_argument,
         "param: '" + spec.param + "' is not one of alpha | gamma | target_x | target_y");
  if (spec.steps < 1) fail(Errc::invalid_argument, "steps: must be at least 1");

  std::vector<Scenario> grid;
  for (int k = 0; k < spec.steps; ++k) {
    const double v = spec.steps == 1
                         ? spec.from
                         : spec.from + (spec.to - spec.from) * k / (spec.steps - 1);
    Scenario s = file.scenario;
    if (spec.param == "alpha") s.alpha = v;
    else if (spec.param == "gamma") s.gamma = v;
    else if (spec.param == "target_x") s.target.x = v;
    else s.target.y = v;
    s.validate();
    grid.push_back(s);
  }

  std::string table =
      "index,param,value,regime,phi_star,J_star,J_star_semantics,critical_alpha,"
      "escape_infeasible,intercept_x,intercept_y,t_f\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Scenario &s = grid[k];
    const auto sol = solver::solve(s);
    const double v = spec.param == "alpha"   ? s.alpha
                     : spec.param == "gamma" ? s.gamma
                     : spec.param == "target_x" ? s.target.x
                                                : s.target.y;
    table += std::to_string(k) + "," + spec.param + "," + io::format_double(v) + "," +
             std::string(solver::to_string(sol.regime)) + "," + io::format_double(sol.phi_star) +
             "," + io::format_double(sol.J_star) + "," +
             std::string(solver::cost_semantics(sol.regime)) + "," +
             io::format_double(sol.critical_alpha) + "," +
             (sol.escape_infeasible ? "true" : "false") + "," +
             io::format_double(sol.intercept_world.x) + "," +
             io::format_double(sol.intercept_world.y) + "," + io::format_double(sol.t_f) + "\n";
  }
  if (out_path)
    write_file(*out_path, table);
  else
    out << table;
  return table;
}

inline std::string cmd_roots(const std::string &scenario_path, std::ostream &out) {
  const auto file = io::load_scenario(scenario_path);
  const auto &s = file.scenario;
  const auto frame = geometry::build_frame(s);
  const auto g = sextic::build_geometry(frame.to_frame(s.target), frame.half_separation, s.gamma,
                                        s.alpha);
  const auto roots = sextic::find_roots(sextic::build_sextic(g));
  const auto circle = geometry::da_circle(frame.half_separation, s.gamma);
  const auto branch = geometry::classify_target(frame.to_frame(s.target), circle) ==
                              geometry::Region::Inside
                          ? sextic::Branch::Inside
                          : sextic::Branch::Outside;
  std::string table = "index,re,im,modulus,angle,residual\n";
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const double angle = wrap_angle(std::arg(roots[k]));
    double residual = std::numeric_limits<double>::quiet_NaN();
    try {
      residual = sextic::stationarity_residual(g, angle, branch);
    } catch (const Error &) {
    }
    table += std::to_string(k + 1) + "," + io::format_double(roots[k].real()) + "," +
             io::format_double(roots[k].imag()) + "," + io::format_double(std::abs(roots[k])) +
             "," + io::format_double(angle) + "," + io::format_double(residual) + "\n";
  }
  out << table;
  return table;
}

/// Entry point shared by the `tad` binary and the tests.
inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Active target defense differential game solver", "tad"};
  app.set_version_flag("--version", std::string(io::kToolVersion));
  app.require_subcommand(1);

  std::string scenario;
  std::optional<std::string> out_path;
  std::optional<std::string> out_dir;
  SweepSpec sweep;

  auto *solve = app.add_subcommand("solve", "Analytic saddle-point solution");
  solve->add_option("scenario", scenario, "Scenario file")->required();
  solve->add_option("-o,--output", out_path, "Write the JSON record here");

  auto *simulate = app.add_subcommand("simulate", "Closed-loop engagement simulation");
  simulate->add_option("scenario", scenario, "Scenario file")->required();
  simulate->add_option("-d,--dir", out_dir, "Directory for trajectory.csv and outcome.json");

  auto *crit = app.add_subcommand("critical-alpha", "Critical Target/Attacker speed ratio");
  crit->add_option("scenario", scenario, "Scenario file")->required();

  auto *sw = app.add_subcommand("sweep", "Solve over a one-parameter grid");
  sw->add_option("scenario", scenario, "Scenario file")->required();
  sw->add_option("--param", sweep.param, "alpha | gamma | target_x | target_y")->required();
  sw->add_option("--from", sweep.from, "First value")->required();
  sw->add_option("--to", sweep.to, "Last value")->required();
  sw->add_option("--steps", sweep.steps, "Number of grid points")->required();
  sw->add_option("-o,--output", out_path, "Write the CSV table here");

  auto *roots = app.add_subcommand("roots", "Roots of the stationarity polynomial");
  roots->add_option("scenario", scenario, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion &) {
    out << io::kToolVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError &e) {
    err << "tad: " << e.what() << '\n';
    return kValidation;
  }

  const char *stage = "scenario";
  try {
    if (solve->parsed()) {
      stage = "solve";
      cmd_solve(scenario, out_path, out);
    } else if (simulate->parsed()) {
      stage = "simulate";
      cmd_simulate(scenario, out_dir, out);
    } else if (crit->parsed()) {
      stage = "critical-alpha";
      cmd_critical_alpha(scenario, out);
    } else if (sw->parsed()) {
      stage = "sweep";
      cmd_sweep(scenario, sweep, out_path, out);
    } else if (roots->parsed()) {
      stage = "roots";
      cmd_roots(scenario, out);
    }
  } catch (const Error &e) {
    err << "tad " << stage << ": " << e.what() << '\n';
    return e.is_validation() ? kValidation : kNumerical;
  } catch (const std::exception &e) {
    err << "tad " << stage << ": " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}

} // namespace tad::cli
