#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "tad/error.hpp"

namespace tad::poly {

using cplx = std::complex<double>;

/// Horner evaluation of sum_k c[k] z^k.
inline cplx evaluate(std::span<const cplx> c, cplx z) {
  cplx acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

/// Value and first derivative in one Horner pass.
inline std::pair<cplx, cplx> evaluate_with_derivative(std::span<const cplx> c, cplx z) {
  cplx p = 0.0;
  cplx dp = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
  }
  return {p, dp};
}

/// Expands lead * prod_i (z - roots[i]) into ascending coefficients.
inline std::vector<cplx> expand(std::span<const cplx> roots, cplx lead = 1.0) {
  std::vector<cplx> c{lead};
  for (const cplx &r : roots) {
    std::vector<cplx> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return c;
}

struct RootOptions {
  double tolerance = 1e-12;
  int max_iterations = 500;
  /// Initial guesses sit on a circle this much larger than the geometric mean
  /// of the root moduli.
  double start_radius_factor = 1.05;
};

/// All roots of sum_k c[k] z^k by Aberth-Ehrlich simultaneous iteration.
///
/// Coefficients are scaled by the largest magnitude; leading coefficients
/// below 1e-14 of it are dropped so the polynomial is rooted at its true
/// degree, and exact zero constant terms contribute roots at the origin.
/// Throws Errc::rooting_failure when the iteration does not settle.
inline std::vector<cplx> find_roots(std::span<const cplx> coeffs, const RootOptions &opt = {}) {
  double scale = 0.0;
  for (const cplx &c : coeffs) scale = std::max(scale, std::abs(c));
  if (!(scale > 0.0) || !std::isfinite(scale))
    fail(Errc::degenerate_polynomial, "all coefficients vanish or are not finite");

  std::vector<cplx> c(coeffs.begin(), coeffs.end());
  for (cplx &v : c) v /= scale;
  while (!c.empty() && std::abs(c.back()) <= 1e-14) c.pop_back();

  std::vector<cplx> roots;
  std::size_t low = 0;
  while (low < c.size() && c[low] == cplx(0.0)) {
    roots.emplace_back(0.0);
    ++low;
  }
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(low));
  const std::size_t n = c.empty() ? 0 : c.size() - 1;
  if (n == 0) return roots;
  if (n == 1) {
    roots.push_back(-c[0] / c[1]);
    return roots;
  }

  // |c0 / cn| is the product of the root moduli.
  const double rho = std::pow(std::abs(c[0]) / std::abs(c[n]), 1.0 / static_cast<double>(n)) *
                     opt.start_radius_factor;
  std::vector<cplx> z(n);
  for (std::size_t k = 0; k < n; ++k)
    z[k] = std::polar(rho, 0.4 + 2.0 * std::numbers::pi * static_cast<double>(k) /
                                     static_cast<double>(n));

  std::vector<double> abs_c(c.size());
  std::transform(c.begin(), c.end(), abs_c.begin(), [](const cplx &v) { return std::abs(v); });
  const auto rounding_floor = [&](cplx at) {
    double acc = 0.0;
    const double m = std::abs(at);
    for (auto it = abs_c.rbegin(); it != abs_c.rend(); ++it) acc = acc * m + *it;
    return 4.0 * std::numeric_limits<double>::epsilon() * acc;
  };

  std::vector<bool> done(n, false);
  bool converged = false;
  for (int iter = 0; iter < opt.max_iterations && !converged; ++iter) {
    converged = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const auto [p, dp] = evaluate_with_derivative(c, z[i]);
      if (std::abs(p) <= rounding_floor(z[i])) {
        done[i] = true;
        continue;
      }
      const cplx ratio = p / dp;
      cplx repulsion = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) repulsion += 1.0 / (z[i] - z[j]);
      const cplx step = ratio / (1.0 - ratio * repulsion);
      z[i] -= step;
      if (std::abs(step) <= opt.tolerance * (1.0 + std::abs(z[i])))
        done[i] = true;
      else
        converged = false;
    }
  }
  if (!converged) fail(Errc::rooting_failure, "Aberth iteration did not converge");
  for (const cplx &r : z)
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
      fail(Errc::rooting_failure, "non-finite root");
  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

} // namespace tad::poly
