#pragma once

#include <cmath>
#include <string>

#include "vgrasp/errors.hpp"

namespace vgrasp {

struct Vec3
{
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  constexpr bool operator==(const Vec3&) const = default;

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b)
{
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

constexpr double squared_norm(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline Vec3 normalized(const Vec3& v)
{
  const double n = norm(v);
  if (!(n > 0.0))
    throw InvalidInput("cannot normalize a zero-length vector");
  return v / n;
}

inline bool is_finite(const Vec3& v)
{
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

inline void require_finite(const Vec3& v, const char* what)
{
  if (!is_finite(v))
    throw InvalidInput(std::string(what) + " has a non-finite component");
}

constexpr Vec3 lerp(const Vec3& a, const Vec3& b, double t) { return a + (b - a) * t; }

struct Quat
{
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr bool operator==(const Quat&) const = default;

  static Quat identity() { return {}; }

  // Rotation of `angle` radians about `axis` (need not be unit length).
  static Quat from_axis_angle(const Vec3& axis, double angle)
  {
    const Vec3 a = vgrasp::normalized(axis);
    const double h = 0.5 * angle;
    const double s = std::sin(h);
    return {std::cos(h), a.x * s, a.y * s, a.z * s};
  }

  constexpr Vec3 vec() const { return {x, y, z}; }
  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
  constexpr Quat conjugate() const { return {w, -x, -y, -z}; }

  Quat normalized() const
  {
    const double n = norm();
    if (!(n > 0.0))
      throw InvalidInput("cannot normalize a zero quaternion");
    return {w / n, x / n, y / n, z / n};
  }

  constexpr Quat operator*(const Quat& o) const
  {
    return {w * o.w - x * o.x - y * o.y - z * o.z,
            w * o.x + x * o.w + y * o.z - z * o.y,
            w * o.y - x * o.z + y * o.w + z * o.x,
            w * o.z + x * o.y - y * o.x + z * o.w};
  }

  constexpr Vec3 rotate(const Vec3& v) const
  {
    const Vec3 q = vec();
    const Vec3 t = cross(q, v) * 2.0;
    return v + t * w + cross(q, t);
  }
};

// Shortest-arc spherical interpolation; t=0 gives a, t=1 gives b (up to sign).
Quat slerp(const Quat& a, const Quat& b, double t);

inline void require_unit(const Quat& q, const char* what)
{
  if (!std::isfinite(q.w) || !std::isfinite(q.x) || !std::isfinite(q.y) || !std::isfinite(q.z) ||
      std::abs(q.norm() - 1.0) > 1e-9)
    throw InvalidInput(std::string(what) + " is not a unit quaternion");
}

// Rigid transform: p_world = rotation * p_local + translation.
struct Transform
{
  Quat rotation;
  Vec3 translation;

  constexpr bool operator==(const Transform&) const = default;

  static Transform identity() { return {}; }
  static Transform from_translation(const Vec3& t) { return {Quat::identity(), t}; }

  constexpr Vec3 apply(const Vec3& p) const { return rotation.rotate(p) + translation; }
  constexpr Vec3 apply_vector(const Vec3& v) const { return rotation.rotate(v); }

  constexpr Transform inverse() const
  {
    const Quat inv = rotation.conjugate();
    return {inv, -inv.rotate(translation)};
  }

  // (a * b).apply(p) == a.apply(b.apply(p))
  constexpr Transform operator*(const Transform& o) const
  {
    return {rotation * o.rotation, rotation.rotate(o.translation) + translation};
  }

  void validate(const char* what = "transform") const
  {
    require_unit(rotation, what);
    require_finite(translation, what);
  }
};

}  // namespace vgrasp
