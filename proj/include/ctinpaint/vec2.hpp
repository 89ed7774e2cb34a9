#pragma once

#include <cmath>

namespace ctinpaint {

/// 2-vector in (row, column) components.
struct Vec2 {
  double i = 0.0;
  double j = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.i + b.i, a.j + b.j}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.i - b.i, a.j - b.j}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.i, s * a.j}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.i * b.i + a.j * b.j; }
inline double norm(Vec2 a) { return std::hypot(a.i, a.j); }
/// Counter-clockwise quarter turn in the (i, j) plane.
constexpr Vec2 perp(Vec2 a) { return {-a.j, a.i}; }

inline Vec2 normalized(Vec2 a) {
  const double n = norm(a);
  return n > 0.0 ? Vec2{a.i / n, a.j / n} : Vec2{};
}

/// Unsigned angle between two nonzero vectors, in degrees.
inline double angle_deg(Vec2 a, Vec2 b) {
  const double c = dot(a, b) / (norm(a) * norm(b));
  return std::acos(std::fmax(-1.0, std::fmin(1.0, c))) * 180.0 / 3.14159265358979323846;
}

} // namespace ctinpaint
