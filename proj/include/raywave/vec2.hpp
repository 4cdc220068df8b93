#pragma once

#include <cmath>

namespace raywave {

struct Vec2 {
  double x = 0.0, y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// unit vector n(psi) = (cos psi, sin psi)
inline Vec2 unit_dir(double psi) { return {std::cos(psi), std::sin(psi)}; }

// symmetric 2x2 matrix (used for velocity Hessians)
struct Mat2 {
  double xx = 0.0, xy = 0.0, yy = 0.0;
};

inline Vec2 operator*(const Mat2& m, Vec2 v) {
  return {m.xx * v.x + m.xy * v.y, m.xy * v.x + m.yy * v.y};
}

// clockwise rotation of the coordinate frame by theta
inline Vec2 rotate_frame(Vec2 v, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * v.x + s * v.y, -s * v.x + c * v.y};
}

}  // namespace raywave
