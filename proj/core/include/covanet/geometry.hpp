#pragma once

#include <cmath>

namespace covanet {

struct Vec2 {
  double x{0.0};
  double y{0.0};

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double k) const { return {x * k, y * k}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }
};

inline Vec2 headingVec(double heading) {
  return {std::cos(heading), std::sin(heading)};
}

/// Rotate +90 degrees; the left normal of a tangent direction.
inline Vec2 leftNormal(Vec2 t) { return {-t.y, t.x}; }

inline Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

}  // namespace covanet
