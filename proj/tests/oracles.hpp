#pragma once

// Reference implementations used only by the tests. They deliberately take
// different routes from the library code: plane projection plus edge
// clamping for closest points, golden-section search for segment distances,
// conservative advancement for sphere casts.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "vgrasp/geometry/triangle_mesh.hpp"

namespace oracle {

using vgrasp::Triangle;
using vgrasp::Vec3;

inline Vec3 closest_on_segment(const Vec3& p, const Vec3& a, const Vec3& b)
{
  const Vec3 ab = b - a;
  const double len2 = vgrasp::dot(ab, ab);
  if (len2 == 0.0)
    return a;
  const double t = std::clamp(vgrasp::dot(p - a, ab) / len2, 0.0, 1.0);
  return a + ab * t;
}

// Solve the 2x2 normal equations for the in-plane coordinates of p; inside
// the triangle return the projection, otherwise the best edge point.
inline Vec3 closest_on_triangle(const Vec3& p, const Triangle& t)
{
  const Vec3 e0 = t.b - t.a;
  const Vec3 e1 = t.c - t.a;
  const Vec3 d = p - t.a;
  const double a00 = vgrasp::dot(e0, e0);
  const double a01 = vgrasp::dot(e0, e1);
  const double a11 = vgrasp::dot(e1, e1);
  const double b0 = vgrasp::dot(d, e0);
  const double b1 = vgrasp::dot(d, e1);
  const double det = a00 * a11 - a01 * a01;
  const double u = (a11 * b0 - a01 * b1) / det;
  const double v = (a00 * b1 - a01 * b0) / det;
  if (u >= 0.0 && v >= 0.0 && u + v <= 1.0)
    return t.a + e0 * u + e1 * v;

  Vec3 best = closest_on_segment(p, t.a, t.b);
  for (const Vec3& q : {closest_on_segment(p, t.b, t.c), closest_on_segment(p, t.c, t.a)})
    if (vgrasp::distance(p, q) < vgrasp::distance(p, best))
      best = q;
  return best;
}

inline double point_triangle_distance(const Vec3& p, const Triangle& t)
{
  return vgrasp::distance(p, closest_on_triangle(p, t));
}

// Distance to a convex set is convex along a line, so golden-section search
// over the segment parameter finds the global minimum.
inline double segment_triangle_distance(const Vec3& s0, const Vec3& s1, const Triangle& t)
{
  auto f = [&](double s) { return point_triangle_distance(vgrasp::lerp(s0, s1, s), t); };
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
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
  return std::min({f(0.0), f(1.0), f1, f2});
}

inline double mesh_distance(const Vec3& p, const vgrasp::TriangleMesh& mesh)
{
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mesh.triangle_count(); ++i)
    best = std::min(best, point_triangle_distance(p, mesh.triangle(i)));
  return best;
}

inline double segment_mesh_distance(const Vec3& a, const Vec3& b, const vgrasp::TriangleMesh& mesh)
{
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mesh.triangle_count(); ++i)
    best = std::min(best, segment_triangle_distance(a, b, mesh.triangle(i)));
  return best;
}

// Strictly inside every face plane of a convex, outward-wound mesh.
inline bool inside_convex(const Vec3& p, const vgrasp::TriangleMesh& mesh)
{
  for (std::size_t i = 0; i < mesh.triangle_count(); ++i) {
    const Triangle t = mesh.triangle(i);
    if (vgrasp::dot(vgrasp::cross(t.b - t.a, t.c - t.a), p - t.a) >= 0.0)
      return false;
  }
  return true;
}

struct CastResult
{
  bool converged = false;
  std::optional<double> t;
};

// Conservative advancement: the surface distance is 1-Lipschitz along the
// path, so stepping by (distance - radius) never passes the first contact.
inline CastResult sphere_cast(const Vec3& start, const Vec3& dir, double radius, double max_length,
                              const vgrasp::TriangleMesh& mesh, double eps = 1e-13,
                              int max_steps = 20000)
{
  double t = 0.0;
  for (int i = 0; i < max_steps; ++i) {
    const double gap = mesh_distance(start + dir * t, mesh) - radius;
    if (gap <= eps)
      return {true, t};
    t += gap;
    if (t > max_length)
      return {true, std::nullopt};
  }
  return {false, std::nullopt};
}

}  // namespace oracle
