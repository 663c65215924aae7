#ifndef MFK_GEOMETRY_HPP
#define MFK_GEOMETRY_HPP

// Planar vector math plus the circle, chord and triangle primitives the
// kinematic model is built from.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mfk/error.hpp"

namespace mfk {

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline bool is_finite(Vec2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }

inline Vec2 unit(double radians) { return {std::cos(radians), std::sin(radians)}; }
inline double heading(Vec2 a) { return std::atan2(a.y, a.x); }

/// Maps any finite angle into (-pi, pi].
inline double normalize_angle(double radians) {
  double r = std::remainder(radians, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

/// A planar angle in radians. Signed angles live in (-pi, pi]; magnitudes
/// returned from arccos live in [0, pi], which is a subset of that range.
class Angle {
 public:
  constexpr Angle() = default;

  static Angle radians(double r) { return Angle(normalize_angle(r)); }
  static Angle degrees(double d) { return radians(d * kPi / 180.0); }

  constexpr double rad() const { return value_; }
  constexpr double deg() const { return value_ * 180.0 / kPi; }

  friend Angle operator+(Angle a, Angle b) { return radians(a.value_ + b.value_); }
  friend Angle operator-(Angle a, Angle b) { return radians(a.value_ - b.value_); }
  friend Angle operator-(Angle a) { return radians(-a.value_); }
  friend constexpr bool operator==(Angle, Angle) = default;

 private:
  constexpr explicit Angle(double r) : value_(r) {}
  double value_ = 0.0;
};

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

/// Relative slack for triangle-inequality checks and arccos clamping.
inline constexpr double kTriangleSlack = 1e-9;

inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Rotation magnitude that moves a point on a circle of `radius` through a
/// chord of length `chord`: arccos(1 - chord^2 / (2 radius^2)).
inline Angle chord_angle(double chord, double radius) {
  if (!(radius > 0.0) || !(chord >= 0.0) || !std::isfinite(chord)) {
    throw Error(ErrorCode::ChordTooLong,
                "chord_angle needs chord >= 0 and radius > 0");
  }
  if (chord > 2.0 * radius * (1.0 + kTriangleSlack)) {
    throw Error(ErrorCode::ChordTooLong,
                "chord " + std::to_string(chord) + " exceeds diameter " +
                    std::to_string(2.0 * radius));
  }
  const double arg = 1.0 - (chord * chord) / (2.0 * radius * radius);
  return Angle::radians(std::acos(std::clamp(arg, -1.0, 1.0)));
}

/// Law of cosines: the angle between sides `d` and `l` of a triangle whose
/// third side is `opposite`. Inputs that break the triangle inequality by
/// more than `slack` (relative to the perimeter) are rejected rather than
/// clamped.
inline Angle triangle_angle(double d, double l, double opposite,
                            double slack = kTriangleSlack) {
  if (!(d > 0.0) || !(l > 0.0) || !(opposite >= 0.0) ||
      !std::isfinite(d + l + opposite)) {
    throw Error(ErrorCode::DegenerateTriangle,
                "triangle sides must be positive and finite");
  }
  const double tol = slack * (d + l + opposite);
  if (opposite > d + l + tol || opposite < std::abs(d - l) - tol) {
    throw Error(ErrorCode::DegenerateTriangle,
                "sides (" + std::to_string(d) + ", " + std::to_string(l) +
                    ", " + std::to_string(opposite) +
                    ") violate the triangle inequality");
  }
  const double arg = (d * d + l * l - opposite * opposite) / (2.0 * d * l);
  return Angle::radians(std::acos(std::clamp(arg, -1.0, 1.0)));
}

inline Vec2 rotate(Vec2 v, double radians) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

inline Vec2 rotate_about(Vec2 p, Vec2 center, Angle angle) {
  return center + rotate(p - center, angle.rad());
}

inline constexpr double kZeroVectorNorm = 1e-12;

/// Signed angle from `from_dir` to `to_dir`; counter-clockwise is positive.
inline Angle signed_turn(Vec2 from_dir, Vec2 to_dir) {
  if (norm(from_dir) < kZeroVectorNorm || norm(to_dir) < kZeroVectorNorm) {
    throw Error(ErrorCode::ZeroVector, "signed_turn on a zero-length vector");
  }
  return Angle::radians(std::atan2(cross(from_dir, to_dir), dot(from_dir, to_dir)));
}

/// Smallest altitude of triangle (a, b, c), i.e. twice the area over the
/// longest side. Zero for collinear or coincident points.
inline double min_altitude(Vec2 a, Vec2 b, Vec2 c) {
  const double longest = std::max({distance(a, b), distance(b, c), distance(a, c)});
  if (longest == 0.0) return 0.0;
  return std::abs(cross(b - a, c - a)) / longest;
}

}  // namespace mfk

#endif  // MFK_GEOMETRY_HPP
