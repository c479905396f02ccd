#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tad/error.hpp"
#include "tad/scenario.hpp"
#include "tad/simulator.hpp"

// Scenario files are a flat TOML subset: `key = value` lines, optional
// [simulation] and [output] tables, `#` comments. Values are numbers,
// double-quoted strings or two-element numeric arrays.
//
//   target   = [0.5, 4.0]
//   attacker = [4.0, 0.0]
//   defender = [-4.0, 0.0]
//   alpha = 0.25
//   gamma = 0.8
//
//   [simulation]
//   dt = 1e-3
//   attacker_policy = "pn"
//   pn_constant = 3

namespace tad::io {

struct SimulationSpec {
  sim::RunOptions run;
  sim::Policies policies;
};

struct OutputSpec {
  std::optional<std::string> solution;
  std::optional<std::string> trajectory_dir;
};

struct ScenarioFile {
  Scenario scenario;
  std::optional<SimulationSpec> simulation;
  OutputSpec output;
};

namespace detail {

using Value = std::variant<double, std::string, std::vector<double>>;

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] inline void syntax(int line, const std::string &msg) {
  fail(Errc::invalid_argument, "line " + std::to_string(line) + ": " + msg);
}

inline double parse_number(std::string_view s, int line, const std::string &key) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    syntax(line, key + ": not a number: '" + std::string(s) + "'");
  if (!std::isfinite(v)) syntax(line, key + ": must be finite");
  return v;
}

inline Value parse_value(std::string_view s, int line, const std::string &key) {
  s = trim(s);
  if (s.empty()) syntax(line, key + ": missing value");
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') syntax(line, key + ": unterminated string");
    return std::string(s.substr(1, s.size() - 2));
  }
  if (s.front() == '[') {
    if (s.back() != ']') syntax(line, key + ": unterminated array");
    std::vector<double> items;
    std::string_view body = trim(s.substr(1, s.size() - 2));
    while (!body.empty()) {
      const auto comma = body.find(',');
      items.push_back(parse_number(body.substr(0, comma), line, key));
      if (comma == std::string_view::npos) break;
      body = trim(body.substr(comma + 1));
    }
    return items;
  }
  return parse_number(s, line, key);
}

inline std::string_view strip_comment(std::string_view s) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_string = !in_string;
    if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

struct Entry {
  Value value;
  int line;
};

inline double as_number(const std::string &key, const Entry &e) {
  if (const double *v = std::get_if<double>(&e.value)) return *v;
  syntax(e.line, key + ": expected a number");
}

inline Vec2 as_point(const std::string &key, const Entry &e) {
  const auto *v = std::get_if<std::vector<double>>(&e.value);
  if (!v || v->size() != 2) syntax(e.line, key + ": expected [x, y]");
  return {(*v)[0], (*v)[1]};
}

inline std::string as_string(const std::string &key, const Entry &e) {
  if (const auto *v = std::get_if<std::string>(&e.value)) return *v;
  syntax(e.line, key + ": expected a string");
}

inline sim::GuidancePolicy as_policy(const std::string &key, const Entry &e, double pn_constant,
                                     std::optional<double> heading) {
  const std::string name = as_string(key, e);
  if (name == "optimal") return sim::OptimalGame{};
  if (name == "pn") return sim::ProportionalNavigation{pn_constant};
  if (name == "pure-pursuit") return sim::PurePursuit{};
  if (name == "fixed") {
    if (!heading) syntax(e.line, key + ": \"fixed\" needs the matching *_heading key");
    return sim::FixedHeading{*heading};
  }
  syntax(e.line, key + ": unknown policy '" + name + "' (optimal | pn | pure-pursuit | fixed)");
}

} // namespace detail

inline ScenarioFile parse_scenario(std::string_view text) {
  using detail::Entry;
  static const std::map<std::string, std::set<std::string>> allowed = {
      {"",
       {"target", "attacker", "defender", "alpha", "gamma", "capture_radius_defender",
        "capture_radius_attacker"}},
      {"simulation",
       {"dt", "t_max", "target_policy", "attacker_policy", "defender_policy", "pn_constant",
        "resolve_stride", "target_heading", "attacker_heading", "defender_heading"}},
      {"output", {"solution", "trajectory_dir"}},
  };

  std::map<std::string, std::map<std::string, Entry>> tables;
  std::string table;
  std::set<std::string> seen_tables;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string_view line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') detail::syntax(line_no, "malformed table header");
      table = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (!allowed.count(table) || table.empty())
        detail::syntax(line_no, "unknown table [" + table + "]");
      if (!seen_tables.insert(table).second)
        detail::syntax(line_no, "duplicate table [" + table + "]");
      tables[table];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) detail::syntax(line_no, "expected key = value");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string qualified = table.empty() ? key : table + "." + key;
    if (!allowed.at(table).count(key)) detail::syntax(line_no, "unknown key '" + qualified + "'");
    auto &entries = tables[table];
    if (entries.count(key)) detail::syntax(line_no, "duplicate key '" + qualified + "'");
    entries.emplace(key, Entry{detail::parse_value(line.substr(eq + 1), line_no, qualified), line_no});
  }

  ScenarioFile file;
  const auto &top = tables[""];
  auto require = [&](const std::string &key) -> const Entry & {
    const auto it = top.find(key);
    if (it == top.end()) fail(Errc::invalid_argument, key + ": required key missing");
    return it->second;
  };
  Scenario &s = file.scenario;
  s.target = detail::as_point("target", require("target"));
  s.attacker = detail::as_point("attacker", require("attacker"));
  s.defender = detail::as_point("defender", require("defender"));
  s.alpha = detail::as_number("alpha", require("alpha"));
  s.gamma = detail::as_number("gamma", require("gamma"));
  if (auto it = top.find("capture_radius_defender"); it != top.end())
    s.capture_radius_defender = detail::as_number(it->first, it->second);
  if (auto it = top.find("capture_radius_attacker"); it != top.end())
    s.capture_radius_attacker = detail::as_number(it->first, it->second);
  s.validate();

  if (auto st = tables.find("simulation"); st != tables.end()) {
    const auto &e = st->second;
    auto number = [&](const std::string &key) -> std::optional<double> {
      const auto it = e.find(key);
      if (it == e.end()) return std::nullopt;
      return detail::as_number("simulation." + key, it->second);
    };
    SimulationSpec spec;
    spec.run.dt = number("dt").value_or(spec.run.dt);
    spec.run.t_max = number("t_max").value_or(spec.run.t_max);
    if (!(spec.run.dt > 0.0)) fail(Errc::invalid_argument, "simulation.dt: must be positive");
    if (!(spec.run.t_max > 0.0)) fail(Errc::invalid_argument, "simulation.t_max: must be positive");
    if (auto stride = number("resolve_stride")) {
      if (!(*stride >= 1.0) || std::floor(*stride) != *stride)
        fail(Errc::invalid_argument, "simulation.resolve_stride: must be a positive integer");
      spec.run.resolve_stride = static_cast<int>(*stride);
    }
    const double pn = number("pn_constant").value_or(3.0);
    if (!(pn > 0.0)) fail(Errc::invalid_argument, "simulation.pn_constant: must be positive");
    auto policy = [&](const std::string &agent, sim::GuidancePolicy fallback) {
      const auto it = e.find(agent + "_policy");
      if (it == e.end()) return fallback;
      return detail::as_policy("simulation." + agent + "_policy", it->second, pn,
                               number(agent + "_heading"));
    };
    spec.policies.target = policy("target", sim::OptimalGame{});
    spec.policies.attacker = policy("attacker", sim::OptimalGame{});
    spec.policies.defender = policy("defender", sim::OptimalGame{});
    if (std::holds_alternative<sim::ProportionalNavigation>(spec.policies.target) ||
        std::holds_alternative<sim::PurePursuit>(spec.policies.target))
      fail(Errc::invalid_argument, "simulation.target_policy: must be optimal or fixed");
    file.simulation = spec;
  }

  if (auto ot = tables.find("output"); ot != tables.end()) {
    for (const auto &[key, entry] : ot->second) {
      const std::string v = detail::as_string("output." + key, entry);
      if (key == "solution") file.output.solution = v;
      else file.output.trajectory_dir = v;
    }
  }
  return file;
}

inline ScenarioFile load_scenario(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::invalid_argument, "scenario: cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

} // namespace tad::io
