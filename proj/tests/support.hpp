#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "tad/scenario.hpp"
#include "tad/solver.hpp"

namespace tad::fx {

inline Scenario example1() { return {{0.5, 4.0}, {4.0, 0.0}, {-4.0, 0.0}, 0.25, 0.8}; }
inline Scenario example2() { return {{3.1, 2.7}, {6.0, 0.0}, {-6.0, 0.0}, 0.5, 0.93}; }
inline Scenario example3() { return {{3.0, 7.5}, {10.0, 0.0}, {-10.0, 0.0}, 0.6, 0.85}; }

inline double uniform(std::mt19937_64 &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random engagement placed anywhere in the world: alpha in [0.1, 0.9],
/// gamma in [0.2, 0.95], Target inside or outside the DA circle but kept
/// away from the circle center and from the Attacker.
inline Scenario random_scenario(std::mt19937_64 &rng) {
  for (;;) {
    const double x_A = uniform(rng, 0.5, 10.0);
    const double gamma = uniform(rng, 0.2, 0.95);
    const double alpha = uniform(rng, 0.1, 0.9);
    const double den = 1.0 - gamma * gamma;
    const double a = (1.0 + gamma * gamma) / den * x_A;
    const double r_A = 2.0 * gamma / den * x_A;
    const Vec2 t{uniform(rng, a - 1.6 * r_A, a + 1.6 * r_A), uniform(rng, -1.6 * r_A, 1.6 * r_A)};
    if (distance(t, {a, 0.0}) < 1e-3 * r_A || distance(t, {x_A, 0.0}) < 1e-2 * x_A) continue;
    const double rot = uniform(rng, -std::numbers::pi, std::numbers::pi);
    const Vec2 shift{uniform(rng, -20.0, 20.0), uniform(rng, -20.0, 20.0)};
    auto place = [&](const Vec2 &p) {
      return shift + Vec2{std::cos(rot) * p.x - std::sin(rot) * p.y,
                          std::sin(rot) * p.x + std::cos(rot) * p.y};
    };
    return {place(t), place({x_A, 0.0}), place({-x_A, 0.0}), alpha, gamma};
  }
}

/// Unit-circle samples shared by every grid oracle.
class CircleTable {
public:
  explicit CircleTable(std::size_t n) : cos_(n), sin_(n) {
    for (std::size_t k = 0; k < n; ++k) {
      const double phi = -std::numbers::pi + 2.0 * std::numbers::pi * k / n;
      cos_[k] = std::cos(phi);
      sin_[k] = std::sin(phi);
    }
  }
  std::size_t size() const { return cos_.size(); }
  double angle(std::size_t k) const { return -std::numbers::pi + 2.0 * std::numbers::pi * k / size(); }
  double cos(std::size_t k) const { return cos_[k]; }
  double sin(std::size_t k) const { return sin_[k]; }

private:
  std::vector<double> cos_, sin_;
};

struct GridOptimum {
  double phi = 0.0;
  double cost = 0.0;
  bool inside = false;
};

/// Brute-force extremum of the interception cost, computed from explicit
/// points in the AD frame rather than the law-of-cosines form used by the
/// solver: the circle point I, the Target T and the Attacker A.
/// Outside: minimize |IT| + alpha |AI|. Inside: maximize alpha |AI| - |IT|.
inline GridOptimum grid_oracle(const Vec2 &t, double x_A, double gamma, double alpha,
                               const CircleTable &table) {
  const double den = 1.0 - gamma * gamma;
  const double a = (1.0 + gamma * gamma) / den * x_A;
  const double r_A = 2.0 * gamma / den * x_A;
  const bool inside = std::hypot(t.x - a, t.y) < r_A;
  const double sign = inside ? -1.0 : 1.0;
  auto cost = [&](double c, double s) {
    const Vec2 i{a - r_A * c, r_A * s};
    const double it = std::hypot(i.x - t.x, i.y - t.y);
    const double ai = std::hypot(i.x - x_A, i.y);
    return inside ? alpha * ai - it : it + alpha * ai;
  };
  std::size_t best = 0;
  double best_cost = sign * cost(table.cos(0), table.sin(0));
  for (std::size_t k = 1; k < table.size(); ++k) {
    const double v = sign * cost(table.cos(k), table.sin(k));
    if (v < best_cost) {
      best_cost = v;
      best = k;
    }
  }
  // Golden-section polish inside the bracketing cells.
  const double h = 2.0 * std::numbers::pi / table.size();
  double lo = table.angle(best) - h, hi = table.angle(best) + h;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double phi) { return sign * cost(std::cos(phi), std::sin(phi)); };
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  const double phi = 0.5 * (lo + hi);
  return {wrap_angle(phi), sign * f(phi), inside};
}

inline GridOptimum grid_oracle(const Scenario &s, const CircleTable &table) {
  const auto frame = geometry::build_frame(s);
  return grid_oracle(frame.to_frame(s.target), frame.half_separation, s.gamma, s.alpha, table);
}

} // namespace tad::fx
