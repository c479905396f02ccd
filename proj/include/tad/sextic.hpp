#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "tad/error.hpp"
#include "tad/geometry.hpp"
#include "tad/polynomial.hpp"
#include "tad/vec2.hpp"

namespace tad::sextic {

using poly::cplx;

/// Reduced parameters of the interception problem, all taken about the DA
/// circle center a. The interception point is parametrized by the angle phi
/// measured at a from the ray a -> A:  I(phi) = (a - r_A cos phi, r_A sin phi).
struct GameGeometry {
  double a = 0.0;       ///< DA-circle center abscissa
  double r_A = 0.0;     ///< DA-circle radius
  double M = 0.0;       ///< |A a|
  double N = 0.0;       ///< |a T|
  double lambda = 0.0;  ///< polar angle of T about a, from ray a -> A, positive toward +y
  double alpha = 0.0;
};

inline GameGeometry build_geometry(const Vec2 &target, double x_A, double gamma, double alpha) {
  const auto circle = geometry::da_circle(x_A, gamma);
  const double a = circle.center.x;
  GameGeometry g;
  g.a = a;
  g.r_A = circle.radius;
  g.M = a - x_A;
  g.N = std::hypot(a - target.x, target.y);
  if (!(g.N > 1e-12 * g.r_A))
    fail(Errc::undefined_angle, "target sits on the DA-circle center");
  g.lambda = std::atan2(target.y, a - target.x);
  g.alpha = alpha;
  return g;
}

inline Vec2 intercept_point(const GameGeometry &g, double phi) {
  return {g.a - g.r_A * std::cos(phi), g.r_A * std::sin(phi)};
}

/// |I(phi) T| by the law of cosines in triangle a-T-I.
inline double target_leg(const GameGeometry &g, double phi) {
  return std::sqrt(
      std::max(0.0, g.r_A * g.r_A + g.N * g.N - 2.0 * g.N * g.r_A * std::cos(phi - g.lambda)));
}

/// |A I(phi)| by the law of cosines in triangle a-A-I.
inline double attacker_leg(const GameGeometry &g, double phi) {
  return std::sqrt(
      std::max(0.0, g.r_A * g.r_A + g.M * g.M - 2.0 * g.M * g.r_A * std::cos(phi)));
}

/// Coefficient of z^k in c[k], z = e^{i phi}.
struct SexticCoefficients {
  std::array<cplx, 7> c{};
};

/// Degree-6 polynomial in z = e^{i phi} whose unit-modulus roots are the
/// stationary points of the interception cost.
inline SexticCoefficients build_sextic(const GameGeometry &g) {
  if (!(g.alpha > 0.0)) fail(Errc::degenerate_polynomial, "alpha must be positive");
  if (!(g.M > 0.0)) fail(Errc::degenerate_polynomial, "M must be positive");
  if (!(g.N > 0.0)) fail(Errc::degenerate_polynomial, "target at the DA-circle center");

  const double rA = g.r_A, M = g.M, N = g.N, al = g.alpha;
  const cplx l = std::polar(1.0, g.lambda);
  const cplx l2 = l * l;
  const double rA2 = rA * rA, N2 = N * N;
  const double sumAM = rA2 + M * M;
  const double k = N / (al * M);   // N / (alpha M)
  const double k2 = N / (al * al * M);

  SexticCoefficients s;
  s.c[6] = N * rA / l * (1.0 - k2 / l);
  s.c[5] = (k / l) * (k / l) * sumAM - rA2 - N2;
  s.c[4] = N * rA * (k2 / l2 * (2.0 * l2 - 1.0) + l - 2.0 / l);
  s.c[3] = 2.0 * (rA2 + N2 - k * k * sumAM);
  s.c[2] = N * rA * (k2 * (2.0 - l2) - 2.0 * l + 1.0 / l);
  s.c[1] = (k * l) * (k * l) * sumAM - rA2 - N2;
  s.c[0] = N * rA * l * (1.0 - k2 * l);
  return s;
}

inline std::vector<cplx> find_roots(const SexticCoefficients &s, const poly::RootOptions &opt = {}) {
  return poly::find_roots(s.c, opt);
}

/// Which interception cost a residual refers to. Outside: |IT| + alpha |AI|.
/// Inside: alpha |AI| - |IT|. The two derivatives are not negatives of each
/// other, but they vanish on sets whose union is the root set of the sextic:
/// squaring either stationarity condition gives the same polynomial.
enum class Branch { Outside, Inside };

namespace detail {
inline std::pair<double, double> legs_checked(const GameGeometry &g, double phi) {
  const double tl = target_leg(g, phi);
  const double al = attacker_leg(g, phi);
  const double floor = 1e-14 * (g.r_A + g.N + g.M);
  if (tl <= floor || al <= floor)
    fail(Errc::singular_configuration, "interception point coincides with an agent");
  return {tl, al};
}
} // namespace detail

/// dJ/dphi of the chosen cost divided by r_A, which makes it dimensionless.
inline double stationarity_residual(const GameGeometry &g, double phi,
                                    Branch branch = Branch::Outside) {
  const auto [tl, al] = detail::legs_checked(g, phi);
  const double t = g.N * std::sin(phi - g.lambda) / tl;
  const double a = g.alpha * g.M * std::sin(phi) / al;
  return branch == Branch::Outside ? t + a : a - t;
}

/// d/dphi of stationarity_residual.
inline double stationarity_slope(const GameGeometry &g, double phi,
                                 Branch branch = Branch::Outside) {
  const auto [tl, al] = detail::legs_checked(g, phi);
  const double su = std::sin(phi - g.lambda), sp = std::sin(phi);
  const double t = g.N * std::cos(phi - g.lambda) / tl - g.N * g.N * g.r_A * su * su / (tl * tl * tl);
  const double a = g.alpha * (g.M * std::cos(phi) / al - g.M * g.M * g.r_A * sp * sp / (al * al * al));
  return branch == Branch::Outside ? t + a : a - t;
}

struct Candidate {
  double angle = 0.0;    ///< arg of the root, in (-pi, pi]
  double residual = 0.0; ///< dJ/dphi at angle; NaN at a singular configuration
  double modulus = 0.0;  ///< |root| of the first root mapping to this angle
  int root_count = 1;    ///< roots sharing this angle (reciprocal pairs collapse)
};

struct CandidateAngles {
  std::vector<Candidate> entries;
};

inline constexpr double kAngleDedup = 1e-9;

/// Every root becomes a candidate angle regardless of its modulus; angles
/// closer than 1e-9 are merged.
inline CandidateAngles candidate_angles(const GameGeometry &g, const std::vector<cplx> &roots,
                                       Branch branch = Branch::Outside) {
  CandidateAngles out;
  for (const cplx &z : roots) {
    const double angle = wrap_angle(std::arg(z));
    bool merged = false;
    for (Candidate &c : out.entries) {
      if (angle_distance(c.angle, angle) < kAngleDedup) {
        ++c.root_count;
        merged = true;
        break;
      }
    }
    if (merged) continue;
    double residual = std::numeric_limits<double>::quiet_NaN();
    try {
      residual = stationarity_residual(g, angle, branch);
    } catch (const Error &) {
    }
    out.entries.push_back({angle, residual, std::abs(z), 1});
  }
  return out;
}

} // namespace tad::sextic
