#pragma once

#include <cmath>
#include <numbers>

namespace tad {

/// Planar point or displacement. Lengths are unit-free.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 &operator+=(const Vec2 &o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2 &operator-=(const Vec2 &o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend constexpr bool operator==(const Vec2 &, const Vec2 &) = default;
};

constexpr Vec2 operator+(Vec2 a, const Vec2 &b) { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2 &b) { return a -= b; }
constexpr Vec2 operator-(const Vec2 &a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(double s, const Vec2 &v) { return {s * v.x, s * v.y}; }
constexpr Vec2 operator*(const Vec2 &v, double s) { return s * v; }
constexpr Vec2 operator/(const Vec2 &v, double s) { return {v.x / s, v.y / s}; }

constexpr double dot(const Vec2 &a, const Vec2 &b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2 &a, const Vec2 &b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2 &v) { return std::hypot(v.x, v.y); }
inline double distance(const Vec2 &a, const Vec2 &b) { return norm(b - a); }

/// Heading of the displacement `v`, in (-pi, pi].
inline double bearing(const Vec2 &v) { return std::atan2(v.y, v.x); }
inline Vec2 unit_from_angle(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::remainder(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

/// Smallest absolute angular separation between two angles.
inline double angle_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

} // namespace tad
