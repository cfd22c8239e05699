#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "vgrasp/geometry/math.hpp"
#include "vgrasp/geometry/triangle_mesh.hpp"

namespace vgrasp {

struct Capsule
{
  Vec3 a;
  Vec3 b;
  double radius = 0.0;

  void validate() const;
  Vec3 center() const { return (a + b) * 0.5; }
};

struct Sphere
{
  Vec3 center;
  double radius = 0.0;

  void validate() const;
};

struct ObjectId
{
  std::uint32_t value = 0;
  auto operator<=>(const ObjectId&) const = default;
};

// A mesh placed in the world. The pivot (object world location) is the
// translation of `pose`.
struct PlacedMesh
{
  ObjectId id;
  std::shared_ptr<const TriangleMesh> mesh;
  Transform pose;

  Vec3 pivot() const { return pose.translation; }
};

struct SphereTraceHit
{
  Vec3 impact_point;
  double hit_distance = 0.0;
  std::uint32_t triangle_index = 0;
};

struct ClosestPoint
{
  Vec3 point;
  double squared_distance = 0.0;
  std::uint32_t triangle_index = 0;
};

struct OverlapEntry
{
  ObjectId id;
  Vec3 world_location;
};

/// Closest point of the closed triangle to p. Throws InvalidInput for
/// degenerate triangles.
Vec3 closest_point_on_triangle(const Vec3& p, const Triangle& tri);

/// Closest points between segments p0-p1 and q0-q1. Returns squared distance.
double closest_points_segment_segment(const Vec3& p0, const Vec3& p1, const Vec3& q0,
                                      const Vec3& q1, Vec3& on_p, Vec3& on_q);

/// Minimum distance between a segment and a closed triangle.
double segment_triangle_distance(const Vec3& s0, const Vec3& s1, const Triangle& tri);

/// Nearest surface point of a mesh to p (mesh-local coordinates).
ClosestPoint closest_point_on_mesh(const Vec3& p, const TriangleMesh& mesh);

/// Capsule trigger overlap with a placed mesh: surface within radius of the
/// capsule segment, or (watertight meshes only) an endpoint inside.
bool capsule_overlaps_mesh(const Capsule& capsule, const TriangleMesh& mesh, const Transform& tf);

/// Sphere overlap: surface within radius of the center, or (watertight) the
/// center inside the mesh.
bool sphere_overlaps_mesh(const Sphere& sphere, const TriangleMesh& mesh, const Transform& tf);

/// Every placed object whose surface or interior intersects the sphere, with
/// its pivot as world location. Output is in input order.
std::vector<OverlapEntry> sphere_overlap_points(const Sphere& sphere,
                                                std::span<const PlacedMesh> objects);

/// Swept-sphere cast against a placed mesh.
///
/// Returns the first parameter t in [0, max_length] at which a sphere of
/// `radius` centered at start + t*direction touches the mesh, together with
/// the touched surface point. A sphere that already overlaps the mesh at the
/// start reports t = 0 and the closest surface point to `start`.
std::optional<SphereTraceHit> sphere_trace(const Vec3& start, const Vec3& direction, double radius,
                                           double max_length, const TriangleMesh& mesh,
                                           const Transform& tf);

/// Strict containment by ray parity. Requires a watertight mesh; points on
/// the surface are reported outside.
bool point_in_mesh(const Vec3& p, const TriangleMesh& mesh, const Transform& tf);

}  // namespace vgrasp
