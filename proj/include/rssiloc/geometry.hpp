#pragma once

#include <cmath>

namespace rssiloc {

// 2-D coordinate in meters.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool is_finite() const { return std::isfinite(x) && std::isfinite(y); }
  double norm() const { return std::hypot(x, y); }

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// x^2 + y^2 of a position, the quantity the linearized system subtracts out.
inline double squared_norm(Point2 p) { return p.x * p.x + p.y * p.y; }

}  // namespace rssiloc
